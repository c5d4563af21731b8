"""Combinatorics of the photon outcome space.

An outcome (occupation list) is a tuple of m non-negative photon counts
summing to n.  The full outcome space for n photons in m modes has
C(m+n-1, n) elements; the collision-free subspace (at most one photon per
mode) has C(m, n).
"""
from __future__ import annotations

import math
from itertools import combinations_with_replacement
from typing import Sequence

DEFAULT_ENUMERATION_CAP = 5_000_000


class CapacityError(ValueError):
    """The requested outcome space is too large for brute-force handling."""


def outcome_space_size(m: int, n: int) -> int:
    """Number of ways to arrange n identical photons in m modes."""
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    return math.comb(m + n - 1, n)


def collision_free_size(m: int, n: int) -> int:
    """Number of outcomes with at most one photon per mode."""
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    return math.comb(m, n)


def validate_occupation(counts: Sequence[int], m: int | None = None,
                        n: int | None = None) -> tuple[int, ...]:
    """Check an occupation list and return it as a tuple of ints."""
    occ = tuple(int(c) for c in counts)
    if any(c < 0 for c in occ):
        raise ValueError(f"occupation entries must be non-negative: {occ}")
    if m is not None and len(occ) != m:
        raise ValueError(f"occupation has {len(occ)} modes, expected {m}")
    if n is not None and sum(occ) != n:
        raise ValueError(f"occupation holds {sum(occ)} photons, expected {n}")
    return occ


def single_photon_input(m: int, n: int) -> tuple[int, ...]:
    """Input state with one photon in each of the first n modes."""
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    return (1,) * n + (0,) * (m - n)


def is_single_photon_input(counts: Sequence[int]) -> bool:
    n = sum(counts)
    return tuple(counts) == single_photon_input(len(counts), n) if n <= len(counts) else False


def enumerate_outcomes(m: int, n: int,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All occupation lists for n photons in m modes.

    Ordering puts photons in the earliest modes first:
    (2,0,0), (1,1,0), (1,0,1), (0,2,0), (0,1,1), (0,0,2) for m=3, n=2.
    Raises CapacityError when the space exceeds `cap`; large spaces should
    be ingested or sampled by rank, never enumerated.
    """
    size = outcome_space_size(m, n)
    if size > cap:
        raise CapacityError(
            f"outcome space |Phi({m},{n})| = {size} exceeds cap {cap}")
    out = []
    for combo in combinations_with_replacement(range(m), n):
        counts = [0] * m
        for j in combo:
            counts[j] += 1
        out.append(tuple(counts))
    return out


def outcome_rank(counts: Sequence[int]) -> int:
    """Rank of an occupation list in enumerate_outcomes order."""
    occ = validate_occupation(counts)
    m = len(occ)
    n_rem = sum(occ)
    rank = 0
    for pos in range(m - 1):
        if n_rem == 0:
            break
        c = occ[pos]
        m_rem = m - pos
        # outcomes placing more than c photons in this mode come first
        for b in range(n_rem, c, -1):
            rank += outcome_space_size(m_rem - 1, n_rem - b)
        n_rem -= c
    return rank


def outcome_unrank(m: int, n: int, rank: int) -> tuple[int, ...]:
    """Occupation list at position `rank` of enumerate_outcomes order."""
    size = outcome_space_size(m, n)
    if not 0 <= rank < size:
        raise ValueError(f"rank {rank} outside [0, {size})")
    counts = []
    n_rem, r = n, rank
    for pos in range(m - 1):
        m_rem = m - pos
        c = n_rem
        while True:
            block = outcome_space_size(m_rem - 1, n_rem - c)
            if r < block:
                break
            r -= block
            c -= 1
        counts.append(c)
        n_rem -= c
    counts.append(n_rem)
    return tuple(counts)


def collision_free_rank(counts: Sequence[int]) -> int:
    """Rank of a collision-free occupation list (lexicographic mode sets)."""
    occ = validate_occupation(counts)
    if any(c > 1 for c in occ):
        raise ValueError(f"occupation is not collision-free: {occ}")
    m = len(occ)
    modes = [i for i, c in enumerate(occ) if c == 1]
    k = len(modes)
    rank = 0
    prev = -1
    for pos, mode in enumerate(modes):
        for a in range(prev + 1, mode):
            rank += math.comb(m - a - 1, k - pos - 1)
        prev = mode
    return rank


def collision_free_unrank(m: int, n: int, rank: int) -> tuple[int, ...]:
    """Collision-free occupation list at position `rank`."""
    size = collision_free_size(m, n)
    if not 0 <= rank < size:
        raise ValueError(f"rank {rank} outside [0, {size})")
    counts = [0] * m
    r, k, a = rank, n, 0
    while k > 0:
        block = math.comb(m - a - 1, k - 1)
        if r < block:
            counts[a] = 1
            k -= 1
        else:
            r -= block
        a += 1
    return tuple(counts)
