"""Transition amplitudes and full output distributions of an interferometer.

The amplitude for input occupation (n_1..n_m) -> output occupation
(s_1..s_m) is perm(Lambda_S) / sqrt(prod n_j! * prod s_k!), where
Lambda_S repeats column j of the unitary n_j times and row k s_k times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .permanent import DEFAULT_PERMANENT_CAP, permanent
from .states import (DEFAULT_ENUMERATION_CAP, CapacityError, outcome_space_size,
                     validate_occupation)


class Amplitude(NamedTuple):
    value: complex
    probability: float


def _mode_indices(counts: Sequence[int]) -> np.ndarray:
    """Flatten an occupation list into per-photon mode indices (ascending)."""
    return np.repeat(np.arange(len(counts)), counts)


def factorial_product(counts: Sequence[int]) -> int:
    return math.prod(math.factorial(int(c)) for c in counts)


def build_submatrix(lam: np.ndarray, input_counts: Sequence[int],
                    output_counts: Sequence[int]) -> np.ndarray:
    """Submatrix with columns repeated per input mode, rows per output mode."""
    lam = np.asarray(lam)
    m = lam.shape[0]
    inp = validate_occupation(input_counts, m=m)
    out = validate_occupation(output_counts, m=m)
    if sum(inp) != sum(out):
        raise ValueError(
            f"photon totals differ: input {sum(inp)}, output {sum(out)}")
    return lam[np.ix_(_mode_indices(out), _mode_indices(inp))]


def output_amplitude(lam: np.ndarray, input_counts: Sequence[int],
                     output_counts: Sequence[int],
                     cap: int = DEFAULT_PERMANENT_CAP) -> Amplitude:
    sub = build_submatrix(lam, input_counts, output_counts)
    norm = math.sqrt(factorial_product(input_counts) * factorial_product(output_counts))
    value = permanent(sub, cap=cap) / norm
    return Amplitude(value, abs(value) ** 2)


@dataclass(frozen=True)
class ProbabilityTable:
    """Output probabilities over the whole outcome space, in enumeration order."""
    m: int
    n: int
    occupations: np.ndarray   # (size, m) small ints
    probabilities: np.ndarray  # (size,) float64

    @property
    def size(self) -> int:
        return self.probabilities.shape[0]

    @property
    def total(self) -> float:
        return float(self.probabilities.sum())

    def items(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for occ, p in zip(self.occupations.tolist(), self.probabilities):
            yield tuple(occ), float(p)

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(self.items())


def _ryser_subsets(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All non-empty column-subset masks (as complex 0/1) and their signs."""
    subsets = np.arange(1, 1 << n, dtype=np.int64)
    masks = ((subsets[:, None] >> np.arange(n)) & 1).astype(np.complex128)
    sizes = masks.real.sum(axis=1).astype(np.int64)
    signs = np.where((n - sizes) % 2 == 0, 1.0, -1.0)
    return masks, signs


def _permanents_for_rows(b: np.ndarray, rows: np.ndarray,
                         chunk: int = 4096) -> np.ndarray:
    """Permanents of b[rows_i, :] for many row-index multisets at once.

    b has shape (m, n); rows has shape (K, n).  Ryser's column-subset sums
    C[s, k] = sum_{j in s} b[k, j] are shared across all outcomes, so each
    permanent reduces to a gather, a product over n and a signed sum.
    """
    n = b.shape[1]
    masks, signs = _ryser_subsets(n)
    col_sums = masks @ b.T  # (2^n - 1, m)
    out = np.empty(rows.shape[0], dtype=np.complex128)
    for lo in range(0, rows.shape[0], chunk):
        sel = rows[lo:lo + chunk]
        prods = col_sums[:, sel].prod(axis=2)  # (2^n - 1, chunk)
        out[lo:lo + chunk] = signs @ prods
    return out


def _output_factorials(rows: np.ndarray) -> np.ndarray:
    """prod_k s_k! per outcome, from sorted per-photon mode indices."""
    k, n = rows.shape
    fact = np.ones(k)
    run = np.ones(k)
    for i in range(1, n):
        same = rows[:, i] == rows[:, i - 1]
        run = np.where(same, run + 1, 1.0)
        fact *= np.where(same, run, 1.0)
    return fact


def full_distribution(lam: np.ndarray, input_counts: Sequence[int],
                      cap: int = DEFAULT_ENUMERATION_CAP) -> ProbabilityTable:
    """Probability table over every outcome for the given input state.

    Probabilities are |amplitude|^2 as computed, not renormalised; their
    sum equals 1 up to numerical error for a unitary matrix.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    m = lam.shape[0]
    inp = validate_occupation(input_counts, m=m)
    n = sum(inp)
    size = outcome_space_size(m, n)
    if size > cap:
        raise CapacityError(
            f"outcome space |Phi({m},{n})| = {size} exceeds cap {cap}")
    if n == 0:
        occ = np.zeros((1, m), dtype=np.int16)
        return ProbabilityTable(m, 0, occ, np.array([1.0]))
    rows = np.array(list(combinations_with_replacement(range(m), n)),
                    dtype=np.int64)
    b = lam[:, _mode_indices(inp)]  # (m, n)
    perms = _permanents_for_rows(b, rows)
    in_fact = factorial_product(inp)
    probs = (perms.real ** 2 + perms.imag ** 2) / (in_fact * _output_factorials(rows))
    occ = np.zeros((size, m), dtype=np.int16)
    np.add.at(occ, (np.repeat(np.arange(size), n), rows.ravel()), 1)
    return ProbabilityTable(m, n, occ, probs)
