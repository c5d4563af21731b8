"""Sample-space filling curves and their polynomial fingerprints.

An experiment draws n_max distinct samples per iteration, tracks the degree
mean mu and standard deviation sigma of the wave function network over the
first N samples at each checkpoint, and fits

    mu(N)    = alpha_mu * N
    sigma(N) = alpha_sigma * N + beta_sigma * N^2

per iteration.  Fingerprint coefficients are across-iteration means, their
errors the across-iteration standard deviations.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .samplers import SamplerKind, SampleSet, sample, split_seed
from .unitary import haar_random_unitary
from .validator import FitFingerprint, separation

_SAMPLE_STREAM = 0
_UNITARY_STREAM = 1


class AveragingMode(enum.Enum):
    FIXED_U = "fixed"
    VARIED_U = "varied"

    @classmethod
    def from_label(cls, label: str) -> "AveragingMode":
        for mode in cls:
            if mode.value == label:
                return mode
        raise ValueError(f"unknown averaging mode '{label}'")


@dataclass(frozen=True)
class ExperimentPlan:
    m: int
    n: int
    sampler: SamplerKind
    mode: AveragingMode
    iterations: int
    n_max: int
    checkpoints: tuple[int, ...]
    radius: int
    master_seed: int
    collision_free: bool = False

    def __post_init__(self):
        object.__setattr__(self, "checkpoints", tuple(int(c) for c in self.checkpoints))
        if self.iterations < 2:
            raise ValueError("iterations must be >= 2 to estimate errors")
        if not self.checkpoints:
            raise ValueError("need at least one checkpoint")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")
        if self.checkpoints[-1] != self.n_max:
            raise ValueError("last checkpoint must equal n_max")
        if self.checkpoints[0] < 1:
            raise ValueError("checkpoints must be >= 1")
        if self.radius < 0:
            raise ValueError("radius must be >= 0")


def default_checkpoints(n_max: int, points: int = 40) -> tuple[int, ...]:
    """`points` roughly equally spaced sample counts ending at n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    grid = {max(1, round(n_max * k / points)) for k in range(1, points + 1)}
    grid.add(n_max)
    return tuple(sorted(grid))


@dataclass(frozen=True)
class FillingCurve:
    """Per-iteration (mu, sigma) at each checkpoint, plus the plan that made it."""
    plan: ExperimentPlan
    mu: np.ndarray     # (iterations, checkpoints)
    sigma: np.ndarray  # (iterations, checkpoints)

    def __post_init__(self):
        want = (self.plan.iterations, len(self.plan.checkpoints))
        if self.mu.shape != want or self.sigma.shape != want:
            raise ValueError(f"curve arrays must have shape {want}")

    @property
    def checkpoints(self) -> tuple[int, ...]:
        return self.plan.checkpoints

    def aggregate(self) -> dict[str, np.ndarray]:
        """Across-iteration mean and spread per checkpoint (cloud position/size)."""
        return {
            "mean_mu": self.mu.mean(axis=0),
            "std_mu": self.mu.std(axis=0, ddof=1),
            "mean_sigma": self.sigma.mean(axis=0),
            "std_sigma": self.sigma.std(axis=0, ddof=1),
        }


def prefix_degree_stats(x: np.ndarray, checkpoints: Sequence[int],
                        radii: Sequence[int]
                        ) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Degree mean/std of the first-N-sample graphs at each checkpoint.

    Degrees are updated incrementally block by block, so the whole pass
    costs O(n_max^2) pair evaluations and the distance work is shared by
    all radii.  Pair overlaps sum(min(a_p, b_p)) are accumulated through
    0/1 threshold indicators multiplied in float32; every intermediate
    value is an exact small integer (far below 2^24), and the result is
    identical to integer arithmetic (see the wfn equivalence tests).
    """
    x = np.asarray(x)
    checkpoints = [int(c) for c in checkpoints]
    if x.shape[0] < checkpoints[-1]:
        raise ValueError("fewer samples than the last checkpoint")
    n_total = int(x[0].sum()) if x.shape[0] else 0
    max_count = int(x.max()) if x.size else 0
    indicators = [(x >= t).astype(np.float32) for t in range(1, max_count + 1)]
    degrees = {int(r): np.zeros(checkpoints[-1], dtype=np.int64) for r in radii}
    mus = {int(r): [] for r in radii}
    sigmas = {int(r): [] for r in radii}
    prev = 0
    for nk in checkpoints:
        blk = slice(prev, nk)
        overlap = np.zeros((nk - prev, nk), dtype=np.float32)
        for ind in indicators:
            overlap += ind[blk] @ ind[:nk].T
        for r in degrees:
            # d < r  <=>  overlap > n - r/2  (d = 2n - 2*overlap)
            linked = overlap > (n_total - r / 2.0)
            degrees[r][:prev] += linked[:, :prev].sum(axis=0)
            new_deg = linked.sum(axis=1)
            if r > 0:
                new_deg -= 1  # self-pair inside the block
            degrees[r][blk] = new_deg
            deg = degrees[r][:nk].astype(np.float64)
            mus[r].append(deg.mean())
            sigmas[r].append(deg.std())
        prev = nk
    return {r: (np.array(mus[r]), np.array(sigmas[r])) for r in degrees}


def _iteration_sample_set(plan: ExperimentPlan, iteration: int,
                          lam: np.ndarray | None) -> SampleSet:
    if plan.mode is AveragingMode.VARIED_U and plan.sampler.needs_unitary:
        lam = haar_random_unitary(
            plan.m, split_seed(plan.master_seed, iteration, _UNITARY_STREAM))
    return sample(plan.sampler, plan.n_max,
                  split_seed(plan.master_seed, iteration, _SAMPLE_STREAM),
                  m=plan.m, n=plan.n, lam=lam,
                  collision_free=plan.collision_free)


def _check_lam(plan: ExperimentPlan, lam) -> None:
    if not plan.sampler.needs_unitary:
        return
    if plan.mode is AveragingMode.FIXED_U and lam is None:
        raise ValueError("fixed-U experiments need the interferometer matrix")
    if plan.mode is AveragingMode.VARIED_U and lam is not None:
        raise ValueError("varied-U experiments draw their own matrices")


def run_experiment_multi_radius(plan: ExperimentPlan, radii: Sequence[int],
                                lam: np.ndarray | None = None
                                ) -> dict[int, FillingCurve]:
    """One experiment evaluated at several radii; samples are shared since
    the draw does not depend on the activation distance."""
    _check_lam(plan, lam)
    radii = [int(r) for r in radii]
    k = len(plan.checkpoints)
    mu = {r: np.empty((plan.iterations, k)) for r in radii}
    sigma = {r: np.empty((plan.iterations, k)) for r in radii}
    for it in range(plan.iterations):
        sset = _iteration_sample_set(plan, it, lam)
        stats = prefix_degree_stats(sset.as_array(), plan.checkpoints, radii)
        for r, (mu_row, sigma_row) in stats.items():
            mu[r][it] = mu_row
            sigma[r][it] = sigma_row
    return {r: FillingCurve(replace(plan, radius=r), mu[r], sigma[r])
            for r in radii}


def run_experiment(plan: ExperimentPlan,
                   lam: np.ndarray | None = None) -> FillingCurve:
    """Draw `iterations` sample sets and track (mu, sigma) at each checkpoint."""
    return run_experiment_multi_radius(plan, [plan.radius], lam)[plan.radius]


def fit_curves(curve: FillingCurve) -> FitFingerprint:
    """Per-iteration least-squares fits without intercept, then mean/std."""
    ck = np.asarray(curve.checkpoints, dtype=np.float64)
    if len(ck) < 3:
        raise ValueError("fitting needs at least 3 checkpoints")
    iters = curve.plan.iterations
    if iters < 2:
        raise ValueError("fitting needs at least 2 iterations")
    alpha_mu = curve.mu @ ck / (ck @ ck)
    design = np.stack([ck, ck ** 2], axis=1)
    alpha_sigma = np.empty(iters)
    beta_sigma = np.empty(iters)
    for it in range(iters):
        coef, *_ = np.linalg.lstsq(design, curve.sigma[it], rcond=None)
        alpha_sigma[it], beta_sigma[it] = coef
    plan = curve.plan
    return FitFingerprint(
        alpha_mu=float(alpha_mu.mean()),
        alpha_sigma=float(alpha_sigma.mean()),
        beta_sigma=float(beta_sigma.mean()),
        err_alpha_mu=float(alpha_mu.std(ddof=1)),
        err_alpha_sigma=float(alpha_sigma.std(ddof=1)),
        err_beta_sigma=float(beta_sigma.std(ddof=1)),
        radius=plan.radius, sampler=plan.sampler.value, mode=plan.mode.value,
        m=plan.m, n=plan.n)


def default_radius_grid(n: int) -> tuple[int, ...]:
    """Even candidate radii 2..2n (odd radii give identical graphs)."""
    return tuple(range(2, 2 * n + 1, 2))


@dataclass(frozen=True)
class RadiusScanResult:
    chosen_radius: int
    separated: bool
    threshold: float
    min_separation: Mapping[int, float]
    pair_separations: Mapping[int, Mapping[tuple[str, str], float]]
    fingerprints: Mapping[int, Mapping[str, FitFingerprint]]


def optimize_radius(plans: Sequence[ExperimentPlan],
                    radii: Sequence[int] | None = None,
                    lam: np.ndarray | None = None,
                    threshold: float = 1.0) -> RadiusScanResult:
    """Pick the radius that best separates the plans' fingerprints.

    The plans must describe the same experiment run with different samplers;
    the chosen radius maximises the smallest pairwise separation.  With a
    single candidate it is returned unconditionally.
    """
    if len(plans) < 2:
        raise ValueError("radius optimisation needs at least 2 samplers")

    def scan_key(p: ExperimentPlan):
        return replace(p, sampler=SamplerKind.UNIFORM, master_seed=0, radius=0)

    base = plans[0]
    for plan in plans[1:]:
        if scan_key(plan) != scan_key(base):
            raise ValueError("plans must differ only in sampler and seed")
    labels = [p.sampler.value for p in plans]
    if len(set(labels)) != len(labels):
        raise ValueError("plans must use distinct samplers")
    radii = list(radii) if radii else list(default_radius_grid(base.n))
    if not radii:
        raise ValueError("candidate radius set is empty")

    fingerprints: dict[int, dict[str, FitFingerprint]] = {int(r): {} for r in radii}
    for plan in plans:
        curves = run_experiment_multi_radius(plan, radii, lam)
        for r, curve in curves.items():
            fingerprints[r][plan.sampler.value] = fit_curves(curve)

    pair_seps: dict[int, dict[tuple[str, str], float]] = {}
    min_sep: dict[int, float] = {}
    for r in fingerprints:
        pairs = {}
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                pairs[(labels[i], labels[j])] = separation(
                    fingerprints[r][labels[i]], fingerprints[r][labels[j]])
        pair_seps[r] = pairs
        min_sep[r] = min(pairs.values())

    chosen = max(min_sep, key=lambda r: (min_sep[r], -r))
    separated = any(s > threshold for pairs in pair_seps.values()
                    for s in pairs.values())
    return RadiusScanResult(chosen, separated, threshold, min_sep,
                            pair_seps, fingerprints)
