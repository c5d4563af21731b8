"""Line-oriented 'key = value' run configuration, parsed fail-closed."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields

from .filling import AveragingMode, ExperimentPlan, default_checkpoints
from .samplers import SamplerKind


class ConfigError(ValueError):
    pass


def _parse_bool(value: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got '{value}'")


def _parse_int_list(value: str) -> tuple[int, ...]:
    return tuple(int(v.strip()) for v in value.split(",") if v.strip())


def _parse_str_list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


@dataclass
class RunConfig:
    m: int | None = None
    n: int | None = None
    sampler: str | None = None
    samplers: tuple[str, ...] = ()
    mode: str = "fixed"
    iterations: int | None = None
    n_max: int | None = None
    checkpoints: tuple[int, ...] = ()
    radius: int | None = None
    candidate_radii: tuple[int, ...] = ()
    seed: int | None = None
    collision_free: bool = False
    count: int | None = None
    threshold: float = 1.0
    format: str = "occupation"
    unitary_in: str | None = None
    unitary_out: str | None = None
    samples_in: str | None = None
    samples_out: str | None = None
    curve_in: str | None = None
    curve_out: str | None = None
    aggregate_out: str | None = None
    fingerprint_out: str | None = None
    blackbox_in: str | None = None
    hypotheses: tuple[str, ...] = ()
    verdict_out: str | None = None
    scan_out: str | None = None
    raw: dict[str, str] = field(default_factory=dict, repr=False)


_PARSERS = {
    "m": int, "n": int, "sampler": str, "samplers": _parse_str_list,
    "mode": str, "iterations": int, "n_max": int,
    "checkpoints": _parse_int_list, "radius": int,
    "candidate_radii": _parse_int_list, "seed": int,
    "collision_free": _parse_bool, "count": int, "threshold": float,
    "format": str, "unitary_in": str, "unitary_out": str, "samples_in": str,
    "samples_out": str, "curve_in": str, "curve_out": str,
    "aggregate_out": str, "fingerprint_out": str, "blackbox_in": str,
    "hypotheses": _parse_str_list, "verdict_out": str, "scan_out": str,
}
assert set(_PARSERS) == {f.name for f in fields(RunConfig)} - {"raw"}


def parse_config_text(text: str, origin: str = "<config>") -> RunConfig:
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _PARSERS:
            raise ConfigError(f"{origin}:{lineno}: unknown key '{key}'")
        if key in cfg.raw:
            raise ConfigError(f"{origin}:{lineno}: duplicate key '{key}'")
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except ValueError as exc:
            raise ConfigError(f"{origin}:{lineno}: bad value for '{key}': {exc}")
        cfg.raw[key] = value
    return cfg


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), origin=str(path))


def config_hash(cfg: RunConfig) -> str:
    canonical = "\n".join(f"{k}={v}" for k, v in sorted(cfg.raw.items()))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _require(cfg: RunConfig, *keys: str):
    missing = [k for k in keys if getattr(cfg, k) is None]
    if missing:
        raise ConfigError(f"missing required config key(s): {', '.join(missing)}")
    return [getattr(cfg, k) for k in keys]


def plan_from_config(cfg: RunConfig, sampler: str | None = None) -> ExperimentPlan:
    m, n, iterations, n_max, radius, seed = _require(
        cfg, "m", "n", "iterations", "n_max", "radius", "seed")
    label = sampler or cfg.sampler
    if label is None:
        raise ConfigError("missing required config key(s): sampler")
    checkpoints = cfg.checkpoints or default_checkpoints(n_max)
    try:
        return ExperimentPlan(
            m=m, n=n, sampler=SamplerKind.from_label(label),
            mode=AveragingMode.from_label(cfg.mode), iterations=iterations,
            n_max=n_max, checkpoints=checkpoints, radius=radius,
            master_seed=seed, collision_free=cfg.collision_free)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
