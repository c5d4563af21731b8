"""Sample streams for the four distributions the protocol must tell apart.

Every sampler returns a SampleSet of *distinct* occupation lists in first-
appearance order; raw draws (duplicates and collision-free rejections
included) are counted so the physical sampling cost stays auditable.
"""
from __future__ import annotations

import enum
import functools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .amplitudes import ProbabilityTable, full_distribution
from .states import (DEFAULT_ENUMERATION_CAP, collision_free_size,
                     collision_free_unrank, outcome_space_size, outcome_unrank,
                     single_photon_input, validate_occupation)
from .unitary import unitary_fingerprint

STARVATION_FACTOR = 1000
_BATCH = 1024


class StarvationError(RuntimeError):
    """Too few reachable outcomes to collect the requested distinct samples."""


class SamplerKind(enum.Enum):
    BOSON = "boson"
    DISTINGUISHABLE = "distinguishable"
    MEAN_FIELD = "mean-field"
    UNIFORM = "uniform"

    @classmethod
    def from_label(cls, label: str) -> "SamplerKind":
        for kind in cls:
            if kind.value == label:
                return kind
        raise ValueError(f"unknown sampler '{label}'; "
                         f"expected one of {[k.value for k in cls]}")

    @property
    def needs_unitary(self) -> bool:
        return self is not SamplerKind.UNIFORM


@dataclass(frozen=True)
class SampleSet:
    """Ordered distinct samples plus provenance metadata."""
    samples: tuple[tuple[int, ...], ...]
    m: int
    n: int
    label: str
    unitary_hash: str | None
    seed: int | None
    collision_free: bool
    raw_draw_count: int

    def __post_init__(self):
        if len(set(self.samples)) != len(self.samples):
            raise ValueError("samples must be pairwise distinct")
        for occ in self.samples:
            if len(occ) != self.m or sum(occ) != self.n or min(occ, default=0) < 0:
                raise ValueError(f"bad sample {occ} for m={self.m}, n={self.n}")
            if self.collision_free and max(occ, default=0) > 1:
                raise ValueError(f"sample {occ} violates the collision-free flag")
        if self.raw_draw_count < len(self.samples):
            raise ValueError("raw_draw_count cannot be below the distinct count")

    def __len__(self) -> int:
        return len(self.samples)

    def as_array(self) -> np.ndarray:
        return np.array(self.samples, dtype=np.int32)


def split_seed(master_seed: int, *path: int) -> int:
    """Derive an independent child seed from a master seed and index path."""
    ss = np.random.SeedSequence([int(master_seed), *[int(p) for p in path]])
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def _require_input_state(input_counts: Sequence[int], m: int) -> tuple[int, ...]:
    inp = validate_occupation(input_counts, m=m)
    n = sum(inp)
    if n < 1 or n > m or inp != single_photon_input(m, n):
        raise ValueError(
            f"samplers expect single photons in the first n modes, got {inp}")
    return inp


# A draw function returns (occupations (k, m) int array, 1-based attempt
# ordinal of each accepted row within the batch, total attempts in batch).
DrawFn = Callable[[int], tuple[np.ndarray, np.ndarray, int]]


def _collect_distinct(draw: DrawFn, count: int, m: int,
                      guard_factor: int = STARVATION_FACTOR
                      ) -> tuple[list[tuple[int, ...]], int]:
    if count < 1:
        raise ValueError("count must be >= 1")
    distinct: dict[tuple[int, ...], None] = {}
    attempts_before = 0
    limit = guard_factor * count
    raw_used = 0
    while len(distinct) < count:
        if attempts_before >= limit:
            raise StarvationError(
                f"collected {len(distinct)}/{count} distinct samples after "
                f"{attempts_before} raw draws (guard {guard_factor}x)")
        occ, positions, batch_attempts = draw(_BATCH)
        done = False
        for row, pos in zip(occ.tolist(), positions.tolist()):
            t = tuple(row)
            if t not in distinct:
                distinct[t] = None
                if len(distinct) == count:
                    raw_used = attempts_before + pos
                    done = True
                    break
        if done:
            break
        attempts_before += batch_attempts
    return list(distinct), raw_used


@functools.lru_cache(maxsize=8)
def _cached_table(lam_bytes: bytes, m: int, input_counts: tuple[int, ...],
                  cap: int) -> ProbabilityTable:
    lam = np.frombuffer(lam_bytes, dtype=np.complex128).reshape(m, m)
    return full_distribution(lam, input_counts, cap=cap)


def _boson_cdf(lam: np.ndarray, inp: tuple[int, ...], collision_free: bool,
               cap: int) -> tuple[np.ndarray, np.ndarray, int]:
    """(occupations, cdf, reachable-outcome count) for inverse-CDF draws."""
    lam = np.ascontiguousarray(np.asarray(lam, dtype=np.complex128))
    table = _cached_table(lam.tobytes(), lam.shape[0], inp, cap)
    occ = table.occupations
    probs = table.probabilities
    if collision_free:
        mask = (occ <= 1).all(axis=1)
        occ, probs = occ[mask], probs[mask]
        if probs.sum() <= 0:
            raise StarvationError("collision-free subspace has zero probability")
    nnz = int((probs > 0).sum())
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    return occ, cdf, nnz


def boson_raw_draws(lam: np.ndarray, input_counts: Sequence[int], count: int,
                    seed, collision_free: bool = False,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
    """Raw draws from the exact distribution (collision-free: restricted
    and renormalised), duplicates retained."""
    inp = _require_input_state(input_counts, np.asarray(lam).shape[0])
    occ, cdf, _ = _boson_cdf(np.asarray(lam), inp, collision_free, cap)
    rng = np.random.default_rng(seed)
    idx = np.minimum(np.searchsorted(cdf, rng.random(count), side="right"),
                     len(cdf) - 1)
    return occ[idx].astype(np.int16)


def boson_sample(lam: np.ndarray, input_counts: Sequence[int], count: int,
                 seed, collision_free: bool = False,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> SampleSet:
    """Exact boson sampling by inverse CDF over the enumerated distribution."""
    lam = np.asarray(lam, dtype=np.complex128)
    m = lam.shape[0]
    inp = _require_input_state(input_counts, m)
    occ_table, cdf, nnz = _boson_cdf(lam, inp, collision_free, cap)
    if nnz < count:
        raise StarvationError(
            f"only {nnz} outcomes carry probability; cannot collect {count}")
    rng = np.random.default_rng(seed)

    def draw(size: int):
        u = rng.random(size)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
        return occ_table[idx], np.arange(1, size + 1), size

    samples, raw = _collect_distinct(draw, count, m)
    return SampleSet(tuple(samples), m, sum(inp), SamplerKind.BOSON.value,
                     unitary_fingerprint(lam), _seed_meta(seed),
                     collision_free, raw)


def _seed_meta(seed) -> int | None:
    return int(seed) if isinstance(seed, (int, np.integer)) else None


def _dist_draw_fn(lam: np.ndarray, n: int, collision_free: bool,
                  rng: np.random.Generator) -> DrawFn:
    m = lam.shape[0]
    weights = np.abs(lam[:, :n]) ** 2
    cdfs = np.cumsum(weights, axis=0)
    cdfs /= cdfs[-1, :]

    def draw(size: int):
        u = rng.random((size, n))
        idx = np.empty((size, n), dtype=np.int64)
        for j in range(n):
            idx[:, j] = np.searchsorted(cdfs[:, j], u[:, j], side="right")
        np.minimum(idx, m - 1, out=idx)
        if collision_free:
            sorted_idx = np.sort(idx, axis=1)
            keep = (np.diff(sorted_idx, axis=1) > 0).all(axis=1) if n > 1 else \
                np.ones(size, dtype=bool)
            positions = np.flatnonzero(keep) + 1
            idx = idx[keep]
        else:
            positions = np.arange(1, size + 1)
        k = idx.shape[0]
        occ = np.zeros((k, m), dtype=np.int16)
        np.add.at(occ, (np.repeat(np.arange(k), n), idx.ravel()), 1)
        return occ, positions, size

    return draw


def distinguishable_raw_draws(lam: np.ndarray, input_counts: Sequence[int],
                              count: int, seed,
                              collision_free: bool = False) -> np.ndarray:
    inp = _require_input_state(input_counts, np.asarray(lam).shape[0])
    draw = _dist_draw_fn(np.asarray(lam), sum(inp), collision_free,
                         np.random.default_rng(seed))
    return _consume_raw(draw, count, np.asarray(lam).shape[0])


def distinguishable_sample(lam: np.ndarray, input_counts: Sequence[int],
                           count: int, seed,
                           collision_free: bool = False) -> SampleSet:
    """Each photon entering mode j lands independently with law |lam_kj|^2;
    quantum interference is discarded."""
    lam = np.asarray(lam, dtype=np.complex128)
    m = lam.shape[0]
    inp = _require_input_state(input_counts, m)
    rng = np.random.default_rng(seed)
    draw = _dist_draw_fn(lam, sum(inp), collision_free, rng)
    samples, raw = _collect_distinct(draw, count, m)
    return SampleSet(tuple(samples), m, sum(inp),
                     SamplerKind.DISTINGUISHABLE.value, unitary_fingerprint(lam),
                     _seed_meta(seed), collision_free, raw)


def mean_field_weights(lam: np.ndarray, n: int,
                       thetas: np.ndarray) -> np.ndarray:
    """Single-particle output law q_k = |sum_j e^{i theta_j} lam_kj|^2 / n
    for each row of phases in `thetas` (shape (draws, n))."""
    b = np.asarray(lam, dtype=np.complex128)[:, :n]
    amps = np.exp(1j * np.asarray(thetas)) @ b.T
    q = (amps.real ** 2 + amps.imag ** 2) / n
    return q


def _mean_field_draw_fn(lam: np.ndarray, n: int, collision_free: bool,
                        rng: np.random.Generator) -> DrawFn:
    m = lam.shape[0]

    def draw(size: int):
        thetas = rng.random((size, n)) * (2.0 * np.pi)
        q = mean_field_weights(lam, n, thetas)
        q /= q.sum(axis=1, keepdims=True)  # exact up to rounding; multinomial wants 1
        occ = rng.multinomial(n, q).astype(np.int16)
        if collision_free:
            keep = (occ <= 1).all(axis=1)
            positions = np.flatnonzero(keep) + 1
            occ = occ[keep]
        else:
            positions = np.arange(1, size + 1)
        return occ, positions, size

    return draw


def mean_field_raw_draws(lam: np.ndarray, input_counts: Sequence[int],
                         count: int, seed,
                         collision_free: bool = False) -> np.ndarray:
    inp = _require_input_state(input_counts, np.asarray(lam).shape[0])
    draw = _mean_field_draw_fn(np.asarray(lam), sum(inp), collision_free,
                               np.random.default_rng(seed))
    return _consume_raw(draw, count, np.asarray(lam).shape[0])


def mean_field_sample(lam: np.ndarray, input_counts: Sequence[int], count: int,
                      seed, collision_free: bool = False) -> SampleSet:
    """Semiclassical model: fresh uniform phases per raw draw, then n photons
    i.i.d. from the resulting single-particle law (reproduces clouding)."""
    lam = np.asarray(lam, dtype=np.complex128)
    m = lam.shape[0]
    inp = _require_input_state(input_counts, m)
    rng = np.random.default_rng(seed)
    draw = _mean_field_draw_fn(lam, sum(inp), collision_free, rng)
    samples, raw = _collect_distinct(draw, count, m)
    return SampleSet(tuple(samples), m, sum(inp), SamplerKind.MEAN_FIELD.value,
                     unitary_fingerprint(lam), _seed_meta(seed),
                     collision_free, raw)


def _uniform_draw_fn(m: int, n: int, collision_free: bool,
                     rand: random.Random) -> DrawFn:
    space = collision_free_size(m, n) if collision_free else outcome_space_size(m, n)
    unrank = collision_free_unrank if collision_free else outcome_unrank

    def draw(size: int):
        occ = np.array([unrank(m, n, rand.randrange(space)) for _ in range(size)],
                       dtype=np.int16)
        return occ, np.arange(1, size + 1), size

    return draw


def uniform_raw_draws(m: int, n: int, count: int, seed,
                      collision_free: bool = False) -> np.ndarray:
    draw = _uniform_draw_fn(m, n, collision_free, random.Random(seed))
    return _consume_raw(draw, count, m)


def uniform_sample(m: int, n: int, count: int, seed,
                   collision_free: bool = False) -> SampleSet:
    """Uniform over the outcome space (or its collision-free subspace) by
    drawing integer ranks and unranking, never enumerating the space."""
    space = collision_free_size(m, n) if collision_free else outcome_space_size(m, n)
    if count > space:
        raise StarvationError(f"requested {count} distinct samples from a "
                              f"space of size {space}")
    rand = random.Random(seed)
    draw = _uniform_draw_fn(m, n, collision_free, rand)
    samples, raw = _collect_distinct(draw, count, m)
    return SampleSet(tuple(samples), m, n, SamplerKind.UNIFORM.value, None,
                     _seed_meta(seed), collision_free, raw)


def _consume_raw(draw: DrawFn, count: int, m: int) -> np.ndarray:
    """Exactly `count` accepted raw draws (rejections excluded, duplicates kept)."""
    rows = np.empty((count, m), dtype=np.int16)
    have = 0
    while have < count:
        occ, _, _ = draw(_BATCH)
        take = min(count - have, occ.shape[0])
        rows[have:have + take] = occ[:take]
        have += take
    return rows


def sample(kind: SamplerKind, count: int, seed, *, m: int, n: int,
           lam: np.ndarray | None = None, collision_free: bool = False,
           cap: int = DEFAULT_ENUMERATION_CAP) -> SampleSet:
    """Dispatch to the sampler named by `kind`."""
    if kind is SamplerKind.UNIFORM:
        return uniform_sample(m, n, count, seed, collision_free)
    if lam is None:
        raise ValueError(f"sampler '{kind.value}' needs a unitary matrix")
    inp = single_photon_input(m, n)
    if kind is SamplerKind.BOSON:
        return boson_sample(lam, inp, count, seed, collision_free, cap)
    if kind is SamplerKind.DISTINGUISHABLE:
        return distinguishable_sample(lam, inp, count, seed, collision_free)
    return mean_field_sample(lam, inp, count, seed, collision_free)
