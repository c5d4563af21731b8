"""Exact matrix permanents via Ryser's formula with Gray-code updates.

perm(A) = (-1)^k * sum over non-empty column subsets S of
(-1)^|S| * prod_i sum_{j in S} a_ij, evaluated in O(2^k * k) by walking
subsets in Gray-code order so each step touches one column.
"""
from __future__ import annotations

import numpy as np

from .states import CapacityError

DEFAULT_PERMANENT_CAP = 30


def permanent(a, cap: int = DEFAULT_PERMANENT_CAP) -> complex:
    """Permanent of a square complex matrix; 1 for the empty matrix."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {arr.shape}")
    k = arr.shape[0]
    if k == 0:
        return 1 + 0j
    if k > cap:
        raise CapacityError(f"matrix dimension {k} exceeds permanent cap {cap}")
    cols = arr.astype(np.complex128).T.copy()  # cols[j] = column j, contiguous
    row_sums = np.zeros(k, dtype=np.complex128)
    total = 0j
    gray = 0
    size = 0
    for i in range(1, 1 << k):
        new_gray = i ^ (i >> 1)
        j = (new_gray ^ gray).bit_length() - 1
        if new_gray & (1 << j):
            row_sums += cols[j]
            size += 1
        else:
            row_sums -= cols[j]
            size -= 1
        gray = new_gray
        prod = row_sums.prod()
        total += prod if size % 2 == 0 else -prod
    return complex(-total if k % 2 else total)
