"""Flat key-value configuration layer shared by the CLI, presets and sweeps.

A run is fully described by a flat dict of primitive values (the manifest
form).  resolve_config() turns that dict into a validated SimulationConfig;
config_to_flat() inverts it, with every derived choice (e.g. the automatic
non-Markovian drive period) resolved to explicit values so that re-running
from a manifest is exact.
"""

from __future__ import annotations

import math

from .analysis import ClassifierThresholds
from .integrator import SimulationConfig
from .model import (
    ClipMode,
    DissipationSchedule,
    DriveProtocol,
    EomVariant,
    MeanFieldState,
    NoiseSettings,
    Regime,
)


class ConfigError(ValueError):
    """Invalid or incomplete run configuration (CLI exit code 2)."""


DEFAULTS: dict = {
    "lambda0": None,            # required
    "omega_T": 1.0,
    "epsilon": 0.0,
    "kappa0": None,             # required
    "m": None,                  # None = constant-rate mode
    "kappa_max": math.inf,
    "clip_mode": "literal",
    "a0": 0.0,
    "seed": 0,
    "resample_interval": None,  # None = one draw per integrator step
    "variant": "consistent",
    "initial_branch": 1,
    "initial_state": None,      # optional explicit [x, p, jx, jy, jz]
    "periods_total": 1000,
    "periods_recorded": 200,
    "steps_per_period": 4096,
    "record_dense": True,
    "period_mode": "auto",      # auto: drive period = rate oscillation period when non-Markovian
    "norm_drift_tol": 1e-6,
}

_REQUIRED = ("lambda0", "kappa0")


def merge_config(*layers: dict) -> dict:
    """Later layers win; unknown keys are rejected."""
    merged = dict(DEFAULTS)
    for layer in layers:
        for key, value in layer.items():
            if key not in DEFAULTS:
                raise ConfigError(f"unknown configuration key {key!r}")
            merged[key] = value
    return merged


def resolve_config(flat: dict) -> SimulationConfig:
    """Validated SimulationConfig from a flat dict (missing keys get defaults)."""
    cfg = merge_config(flat)
    for key in _REQUIRED:
        if cfg[key] is None:
            raise ConfigError(f"missing required configuration key {key!r}")
    try:
        clip = ClipMode(cfg["clip_mode"])
    except ValueError:
        raise ConfigError(f"unknown clip_mode {cfg['clip_mode']!r}") from None
    try:
        variant = EomVariant(cfg["variant"])
    except ValueError:
        raise ConfigError(f"unknown variant {cfg['variant']!r}") from None
    if cfg["period_mode"] not in ("auto", "base"):
        raise ConfigError(f"period_mode must be 'auto' or 'base', got {cfg['period_mode']!r}")
    try:
        schedule = DissipationSchedule(
            kappa0=float(cfg["kappa0"]),
            m=None if cfg["m"] is None else float(cfg["m"]),
            kappa_max=float(cfg["kappa_max"]),
            clip_mode=clip,
        )
        omega_T = float(cfg["omega_T"])
        if cfg["period_mode"] == "auto" and schedule.regime is Regime.NON_MARKOVIAN:
            omega_T = 0.5 * schedule.abs_d
        drive = DriveProtocol(
            lambda0=float(cfg["lambda0"]),
            omega_T=omega_T,
            epsilon=float(cfg["epsilon"]),
        )
        noise = NoiseSettings(
            a0=float(cfg["a0"]),
            seed=int(cfg["seed"]),
            resample_interval=(
                None if cfg["resample_interval"] is None else float(cfg["resample_interval"])
            ),
        )
        if cfg["initial_state"] is not None:
            initial = MeanFieldState.from_array(cfg["initial_state"])
        else:
            initial = int(cfg["initial_branch"])
        return SimulationConfig(
            drive=drive,
            schedule=schedule,
            noise=noise,
            variant=variant,
            initial=initial,
            periods_total=int(cfg["periods_total"]),
            periods_recorded=int(cfg["periods_recorded"]),
            steps_per_period=int(cfg["steps_per_period"]),
            record_dense=bool(cfg["record_dense"]),
            norm_drift_tol=float(cfg["norm_drift_tol"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_flat(config: SimulationConfig) -> dict:
    """Fully resolved flat form (period_mode pinned to the explicit omega_T)."""
    flat = {
        "lambda0": config.drive.lambda0,
        "omega_T": config.drive.omega_T,
        "epsilon": config.drive.epsilon,
        "kappa0": config.schedule.kappa0,
        "m": config.schedule.m,
        "kappa_max": config.schedule.kappa_max,
        "clip_mode": config.schedule.clip_mode.value,
        "a0": config.noise.a0 if config.noise else 0.0,
        "seed": config.noise.seed if config.noise else 0,
        "resample_interval": config.noise.resample_interval if config.noise else None,
        "variant": config.variant.value,
        "periods_total": config.periods_total,
        "periods_recorded": config.periods_recorded,
        "steps_per_period": config.steps_per_period,
        "record_dense": config.record_dense,
        "period_mode": "base",
        "norm_drift_tol": config.norm_drift_tol,
    }
    if isinstance(config.initial, MeanFieldState):
        flat["initial_branch"] = DEFAULTS["initial_branch"]
        flat["initial_state"] = list(config.initial.as_array())
    else:
        flat["initial_branch"] = config.initial
        flat["initial_state"] = None
    return flat


def _parse_scalar(text: str):
    lowered = text.lower()
    if lowered in ("none", "null", ""):
        return None
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    if lowered in ("inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_value(text: str):
    """Single scalar or a comma-separated list of scalars."""
    text = text.strip()
    if "," in text:
        return [_parse_scalar(part.strip()) for part in text.split(",")]
    return _parse_scalar(text)


def load_config_file(path) -> dict:
    """Flat 'key = value' file; '#' starts a comment."""
    out: dict = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = parse_value(value)
    return out


def thresholds_from_flat(flat: dict) -> ClassifierThresholds:
    known = ClassifierThresholds().to_dict()
    overrides = {k: flat[k] for k in flat if k in known}
    return ClassifierThresholds(**{**known, **overrides})
