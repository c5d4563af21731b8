"""Accept/reject verdicts from fitted filling-curve fingerprints.

Validation works by rejection only: a black box whose fingerprint is far
from every classically simulatable mock-up has *survived* the test, it has
not been proven to be a correct boson sampler.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

ALL_DIMS = ("alpha_mu", "alpha_sigma", "beta_sigma")
REDUCED_DIMS = ("alpha_mu", "beta_sigma")
DEFAULT_THRESHOLD = 1.0

CONSISTENT = "consistent"
REJECTED = "rejected"


@dataclass(frozen=True)
class FitFingerprint:
    """Fitted (alpha_mu, alpha_sigma, beta_sigma) with their spreads."""
    alpha_mu: float
    alpha_sigma: float
    beta_sigma: float
    err_alpha_mu: float
    err_alpha_sigma: float
    err_beta_sigma: float
    radius: int
    sampler: str
    mode: str
    m: int
    n: int

    def __post_init__(self):
        for name in ("err_alpha_mu", "err_alpha_sigma", "err_beta_sigma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def coefficient(self, dim: str) -> float:
        return getattr(self, dim)

    def error(self, dim: str) -> float:
        return getattr(self, "err_" + dim)

    @property
    def sigma_linear_negligible(self) -> bool:
        """True when alpha_sigma is zero within its own error bar."""
        return abs(self.alpha_sigma) < self.err_alpha_sigma


@dataclass(frozen=True)
class Hypothesis:
    label: str
    fingerprint: FitFingerprint


@dataclass(frozen=True)
class VerdictRow:
    label: str
    separation: float
    decision: str
    dims: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    rows: tuple[VerdictRow, ...]
    threshold: float
    dimensionality: str  # "3-param" or "2-param"
    radius: int
    m: int
    n: int

    def decision_for(self, label: str) -> str:
        for row in self.rows:
            if row.label == label:
                return row.decision
        raise KeyError(label)


def _check_comparable(a: FitFingerprint, b: FitFingerprint) -> None:
    if (a.radius, a.m, a.n) != (b.radius, b.m, b.n):
        raise ValueError(
            f"fingerprints are not comparable: (R={a.radius}, m={a.m}, n={a.n})"
            f" vs (R={b.radius}, m={b.m}, n={b.n})")


def separation(a: FitFingerprint, b: FitFingerprint,
               dims: Sequence[str] = ALL_DIMS) -> float:
    """Variance-normalised distance sqrt(sum (a_i-b_i)^2 / (ea_i^2+eb_i^2)).

    A value above 1 means the two 1-sigma error ellipsoids are disjoint
    along the chosen parameter axes.
    """
    _check_comparable(a, b)
    if not dims or any(d not in ALL_DIMS for d in dims):
        raise ValueError(f"dims must be a non-empty subset of {ALL_DIMS}")
    total = 0.0
    for dim in dims:
        diff = a.coefficient(dim) - b.coefficient(dim)
        var = a.error(dim) ** 2 + b.error(dim) ** 2
        if var == 0.0:
            if diff != 0.0:
                return math.inf
            continue
        total += diff * diff / var
    return math.sqrt(total)


def validate(blackbox: FitFingerprint, hypotheses: Sequence[Hypothesis],
             threshold: float = DEFAULT_THRESHOLD) -> Verdict:
    """Score the black box against each hypothesis fingerprint.

    alpha_sigma is dropped from a comparison when it is zero within errors
    on *both* sides (the collision-free large-system regime); the verdict
    is labelled 2-param only if that held for every hypothesis.
    """
    if not hypotheses:
        raise ValueError("need at least one hypothesis")
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    rows = []
    all_reduced = True
    for hyp in hypotheses:
        reduced = (blackbox.sigma_linear_negligible
                   and hyp.fingerprint.sigma_linear_negligible)
        dims = REDUCED_DIMS if reduced else ALL_DIMS
        all_reduced &= reduced
        sep = separation(blackbox, hyp.fingerprint, dims)
        decision = REJECTED if sep > threshold else CONSISTENT
        rows.append(VerdictRow(hyp.label, sep, decision, dims))
    dimensionality = "2-param" if all_reduced else "3-param"
    return Verdict(tuple(rows), threshold, dimensionality,
                   blackbox.radius, blackbox.m, blackbox.n)
