"""On-disk formats: sample files, filling curves, fingerprints, verdicts.

All writers accept extra header lines (emitted as '# ...'); readers skip
and, where useful, parse them.  Sample files come in two flavours:

  occupation  one line per sample, m photon counts
  mode-list   one line per sample, n 1-based mode indices (any order)
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .filling import AveragingMode, ExperimentPlan, FillingCurve
from .samplers import SamplerKind, SampleSet
from .validator import FitFingerprint, Verdict
from .wfn import l1_distance, samples_matrix

_FMT = "%.17g"  # full double precision


def _meta_str(value) -> str:
    return "none" if value is None else str(value)


def _parse_meta(value: str):
    return None if value == "none" else value


def _header_fields(lines: list[str]) -> dict[str, str]:
    fields: dict[str, str] = {}
    for line in lines:
        for token in line.split():
            if "=" in token:
                key, _, val = token.partition("=")
                fields.setdefault(key, val)
    return fields


def write_sample_set(path, sset: SampleSet, fmt: str = "occupation",
                     header_lines: Iterable[str] = ()) -> None:
    if fmt not in ("occupation", "mode-list"):
        raise ValueError(f"unknown sample format '{fmt}'")
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"#format={fmt} m={sset.m} n={sset.n}\n")
        fh.write(f"# sampler={sset.label} seed={_meta_str(sset.seed)}"
                 f" unitary={_meta_str(sset.unitary_hash)}"
                 f" collision_free={str(sset.collision_free).lower()}"
                 f" raw_draws={sset.raw_draw_count}\n")
        for occ in sset.samples:
            if fmt == "occupation":
                fh.write(" ".join(str(c) for c in occ) + "\n")
            else:
                modes = [str(i + 1) for i, c in enumerate(occ) for _ in range(c)]
                fh.write(" ".join(modes) + "\n")


def _ints(parts: list[str], where: str) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"{where}: non-integer token") from exc


def _parse_occupation_line(parts: list[str], m: int, n: int,
                           where: str) -> tuple[int, ...]:
    if len(parts) != m:
        raise ValueError(f"{where}: expected {m} counts, found {len(parts)}")
    occ = tuple(_ints(parts, where))
    if any(c < 0 for c in occ):
        raise ValueError(f"{where}: negative photon count")
    if sum(occ) != n:
        raise ValueError(f"{where}: photons sum to {sum(occ)}, expected {n}")
    return occ


def _parse_mode_list_line(parts: list[str], m: int, n: int,
                          where: str) -> tuple[int, ...]:
    if len(parts) != n:
        raise ValueError(f"{where}: expected {n} mode indices, found {len(parts)}")
    counts = [0] * m
    for idx in _ints(parts, where):
        if not 1 <= idx <= m:
            raise ValueError(f"{where}: mode index {idx} outside 1..{m}")
        counts[idx - 1] += 1
    return tuple(counts)


def ingest_samples(path, fmt: str, m: int, n: int) -> SampleSet:
    """Read a sample file, dropping duplicate lines (first occurrence kept).

    raw_draw_count records the number of data lines, so the number of
    dropped duplicates is raw_draw_count - len(samples).
    """
    if fmt not in ("occupation", "mode-list"):
        raise ValueError(f"unknown sample format '{fmt}'")
    header: list[str] = []
    distinct: dict[tuple[int, ...], None] = {}
    raw = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                header.append(stripped.lstrip("# "))
                continue
            where = f"{path}:{lineno}"
            parts = stripped.split()
            occ = (_parse_occupation_line(parts, m, n, where)
                   if fmt == "occupation"
                   else _parse_mode_list_line(parts, m, n, where))
            raw += 1
            distinct.setdefault(occ, None)
    if raw == 0:
        raise ValueError(f"{path}: no sample lines found")
    fields = _header_fields(header)
    raw_meta = int(fields["raw_draws"]) if "raw_draws" in fields else raw
    samples = tuple(distinct)
    if "collision_free" in fields:
        collision_free = fields["collision_free"] == "true"
    else:
        collision_free = all(max(occ) <= 1 for occ in samples)
    seed = _parse_meta(fields.get("seed", "none"))
    return SampleSet(samples, m, n,
                     fields.get("sampler", "ingested"),
                     _parse_meta(fields.get("unitary", "none")),
                     int(seed) if seed is not None else None,
                     collision_free, raw_meta)


def load_sample_set(path) -> SampleSet:
    """Read a sample file whose header declares format, m and n."""
    with open(path) as fh:
        header = [ln.strip().lstrip("# ") for ln in fh
                  if ln.strip().startswith("#")]
    fields = _header_fields(header)
    try:
        fmt, m, n = fields["format"], int(fields["m"]), int(fields["n"])
    except KeyError as exc:
        raise ValueError(f"{path}: header does not declare {exc}") from exc
    return ingest_samples(path, fmt, m, n)


def write_edge_list(path, samples, radius: int,
                    header_lines: Iterable[str] = ()) -> None:
    """Dump graph edges as 'i j' lines with i < j, zero-based node indices."""
    x = samples_matrix(samples)
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# radius={radius} nodes={x.shape[0]}\n")
        for i in range(x.shape[0]):
            for j in range(i + 1, x.shape[0]):
                if l1_distance(x[i], x[j]) < radius:
                    fh.write(f"{i} {j}\n")


def write_curve(path, curve: FillingCurve,
                header_lines: Iterable[str] = ()) -> None:
    plan = curve.plan
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# m={plan.m} n={plan.n} sampler={plan.sampler.value}"
                 f" mode={plan.mode.value} radius={plan.radius}"
                 f" collision_free={str(plan.collision_free).lower()}"
                 f" master_seed={plan.master_seed}\n")
        fh.write("iteration\tN\tmu\tsigma\n")
        for it in range(plan.iterations):
            for k, nk in enumerate(plan.checkpoints):
                fh.write(f"{it}\t{nk}\t{_FMT % curve.mu[it, k]}"
                         f"\t{_FMT % curve.sigma[it, k]}\n")


def write_curve_aggregate(path, curve: FillingCurve,
                          header_lines: Iterable[str] = ()) -> None:
    agg = curve.aggregate()
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("N\tmean_mu\tstd_mu\tmean_sigma\tstd_sigma\n")
        for k, nk in enumerate(curve.checkpoints):
            fh.write(f"{nk}\t{_FMT % agg['mean_mu'][k]}\t{_FMT % agg['std_mu'][k]}"
                     f"\t{_FMT % agg['mean_sigma'][k]}\t{_FMT % agg['std_sigma'][k]}\n")


def read_curve(path) -> FillingCurve:
    header: list[str] = []
    rows: list[tuple[int, int, float, float]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                header.append(stripped.lstrip("# "))
                continue
            if stripped.startswith("iteration"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns")
            rows.append((int(parts[0]), int(parts[1]),
                         float(parts[2]), float(parts[3])))
    if not rows:
        raise ValueError(f"{path}: no curve rows found")
    fields = _header_fields(header)
    try:
        plan = ExperimentPlan(
            m=int(fields["m"]), n=int(fields["n"]),
            sampler=SamplerKind.from_label(fields["sampler"]),
            mode=AveragingMode.from_label(fields["mode"]),
            iterations=max(r[0] for r in rows) + 1,
            n_max=max(r[1] for r in rows),
            checkpoints=tuple(sorted({r[1] for r in rows})),
            radius=int(fields["radius"]),
            master_seed=int(fields["master_seed"]),
            collision_free=fields["collision_free"] == "true")
    except KeyError as exc:
        raise ValueError(f"{path}: curve header misses {exc}") from exc
    index = {nk: k for k, nk in enumerate(plan.checkpoints)}
    mu = np.full((plan.iterations, len(plan.checkpoints)), np.nan)
    sigma = np.full_like(mu, np.nan)
    for it, nk, mu_v, sigma_v in rows:
        mu[it, index[nk]] = mu_v
        sigma[it, index[nk]] = sigma_v
    if np.isnan(mu).any() or np.isnan(sigma).any():
        raise ValueError(f"{path}: incomplete curve (missing iteration rows)")
    return FillingCurve(plan, mu, sigma)


_FP_COLUMNS = ("alpha_mu", "alpha_sigma", "beta_sigma", "err_alpha_mu",
               "err_alpha_sigma", "err_beta_sigma", "radius", "sampler",
               "mode", "m", "n")


def write_fingerprint(path, fp: FitFingerprint,
                      header_lines: Iterable[str] = ()) -> None:
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("\t".join(_FP_COLUMNS) + "\n")
        vals = [fp.alpha_mu, fp.alpha_sigma, fp.beta_sigma, fp.err_alpha_mu,
                fp.err_alpha_sigma, fp.err_beta_sigma]
        fh.write("\t".join([_FMT % v for v in vals]
                           + [str(fp.radius), fp.sampler, fp.mode,
                              str(fp.m), str(fp.n)]) + "\n")


def read_fingerprint(path) -> FitFingerprint:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) != 2 or lines[0].split("\t") != list(_FP_COLUMNS):
        raise ValueError(f"{path}: not a fingerprint file")
    vals = lines[1].split("\t")
    if len(vals) != len(_FP_COLUMNS):
        raise ValueError(f"{path}: expected {len(_FP_COLUMNS)} columns")
    return FitFingerprint(
        alpha_mu=float(vals[0]), alpha_sigma=float(vals[1]),
        beta_sigma=float(vals[2]), err_alpha_mu=float(vals[3]),
        err_alpha_sigma=float(vals[4]), err_beta_sigma=float(vals[5]),
        radius=int(vals[6]), sampler=vals[7], mode=vals[8],
        m=int(vals[9]), n=int(vals[10]))


def write_verdict(path, verdict: Verdict,
                  header_lines: Iterable[str] = ()) -> None:
    dims = ("alpha_mu,beta_sigma" if verdict.dimensionality == "2-param"
            else "alpha_mu,alpha_sigma,beta_sigma")
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# dims={dims} threshold={_FMT % verdict.threshold}"
                 f" radius={verdict.radius} m={verdict.m} n={verdict.n}\n")
        fh.write("label\tseparation\tdecision\n")
        for row in verdict.rows:
            fh.write(f"{row.label}\t{_FMT % row.separation}\t{row.decision}\n")
