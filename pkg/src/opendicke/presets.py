"""Named parameter sets for one-command reproduction of the reference figures.

Simulation presets are flat config overrides (see runconfig.DEFAULTS) plus an
optional "thresholds" block consumed by the classifier; sweep presets bundle
the two grid axes with a base configuration.  fig1b/d/f alias the runs of
fig1a/c/e (they are different views of the same data).

Calibration notes (knobs the reference parameter sets leave open):
* fig1a runs 4000 periods: at kappa0 = 0.05 the period-doubled orbit
  contracts with a ~170-period time constant and is not locked to the
  classifier tolerance after 1000 periods.
* The fig2 panel (m, epsilon) pairs were located by classifier scans; the
  six-point orbit (fig2c) was only found at kappa_max = 3 (no period-6
  locking window showed up at kappa_max = 5 down to epsilon steps of 5e-4).
* fig4 carries period_tol = 0.1: the a0 = 0.5 noise scatters stroboscopic
  returns by ~0.05 max-norm while the two orbit clusters stay ~1.4 apart.
* The appB runs use sign-preserving rate clipping: with the literal rule the
  m = kappa0/4 panel settles on a quasi-periodic curve instead of the
  expected scattered/thermal cloud, and the choice of rule is an open
  convention of the rate definition.
"""

from __future__ import annotations

KAPPA0_STRONG = 2.7  # dissipator strength shared by the non-Markovian studies

SIMULATE_PRESETS: dict[str, dict] = {
    # constant-rate (infinite spectral width) runs, drive at omega_T = 1
    "fig1a": {
        "lambda0": 1.0,
        "omega_T": 1.0,
        "epsilon": 0.02,
        "kappa0": 0.05,
        "periods_total": 4000,
    },
    "fig1c": {"lambda0": 1.0, "omega_T": 1.0, "epsilon": 0.02, "kappa0": KAPPA0_STRONG},
    # non-Markovian runs: drive period locked to the rate oscillation period
    "fig1e": {
        "lambda0": 1.0,
        "epsilon": 0.02,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 4.0,
        "kappa_max": 5.0,
    },
    # dynamical-phase gallery at kappa0 = 2.7 (epsilon, m calibrated per panel)
    "fig2a": {  # thermal: scattered stroboscopic cloud
        "lambda0": 1.0,
        "epsilon": 0.02,
        "kappa0": KAPPA0_STRONG,
        "m": 0.075 * KAPPA0_STRONG,
        "kappa_max": 5.0,
        "steps_per_period": 8192,  # chaotic: keeps the spin-norm diagnostic small
    },
    "fig2b": {  # period-doubled (DTC)
        "lambda0": 1.0,
        "epsilon": 0.03,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 4.0,
        "kappa_max": 5.0,
    },
    "fig2c": {  # sextet: six-point stroboscopic orbit
        "lambda0": 1.0,
        "epsilon": 0.08,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 10.0,
        "kappa_max": 3.0,
        "steps_per_period": 8192,
    },
    "fig2d": {  # limit cycle: aperiodic points on a closed curve
        "lambda0": 1.0,
        "epsilon": 0.06,
        "kappa0": KAPPA0_STRONG,
        "m": 0.16 * KAPPA0_STRONG,
        "kappa_max": 5.0,
    },
    # noisy aperiodic rate
    "fig4": {
        "lambda0": 1.0,
        "epsilon": 0.03,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 4.0,
        "kappa_max": 5.0,
        "a0": 0.5,
        "seed": 0,
        "thresholds": {"period_tol": 0.1},
    },
    # large clipping bound: dissipation dominates
    "appB-a": {
        "lambda0": 1.0,
        "epsilon": 0.02,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG,
        "kappa_max": 10.0,
        "clip_mode": "sign_preserving",
    },
    "appB-b": {
        "lambda0": 1.0,
        "epsilon": 0.02,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 4.0,
        "kappa_max": 10.0,
        "clip_mode": "sign_preserving",
        "steps_per_period": 8192,  # chaotic: keeps the spin-norm diagnostic < 1e-8
    },
    # reentrant multiplet region beyond the first doubling
    "appC": {
        "lambda0": 1.0,
        "epsilon": 0.07,
        "kappa0": KAPPA0_STRONG,
        "m": KAPPA0_STRONG / 5.0,
        "kappa_max": 3.0,
    },
}

_ALIASES = {"fig1b": "fig1a", "fig1d": "fig1c", "fig1f": "fig1e"}

SWEEP_PRESETS: dict[str, dict] = {
    "fig3a": {
        "axis1": {"name": "epsilon", "lo": 0.0, "hi": 0.10, "count": 41},
        "axis2": {"name": "m", "lo": 0.05 * KAPPA0_STRONG, "hi": 3.0 * KAPPA0_STRONG, "count": 41},
        "base": {
            "lambda0": 1.0,
            "omega_T": 1.0,
            "kappa0": KAPPA0_STRONG,
            "kappa_max": 5.0,
            # chaotic deep-NM cells accumulate harmless integrator norm drift
            # above the strict single-run default; the drift stays recorded
            "norm_drift_tol": 1e-4,
        },
        "base_seed": 0,
    },
    "fig3b": {
        "axis1": {"name": "epsilon", "lo": 0.0, "hi": 0.10, "count": 41},
        "axis2": {"name": "m", "lo": 0.05 * KAPPA0_STRONG, "hi": 3.0 * KAPPA0_STRONG, "count": 41},
        "base": {
            "lambda0": 1.0,
            "omega_T": 1.0,
            "kappa0": KAPPA0_STRONG,
            "kappa_max": 3.0,
            "norm_drift_tol": 1e-4,
        },
        "base_seed": 0,
    },
}


def simulate_preset(name: str) -> dict:
    key = _ALIASES.get(name, name)
    if key not in SIMULATE_PRESETS:
        raise KeyError(name)
    preset = dict(SIMULATE_PRESETS[key])
    if "thresholds" in preset:
        preset["thresholds"] = dict(preset["thresholds"])
    return preset


def sweep_preset(name: str) -> dict:
    if name not in SWEEP_PRESETS:
        raise KeyError(name)
    preset = SWEEP_PRESETS[name]
    return {
        "axis1": dict(preset["axis1"]),
        "axis2": dict(preset["axis2"]),
        "base": dict(preset["base"]),
        "base_seed": preset["base_seed"],
    }


def simulate_preset_names() -> list[str]:
    return sorted([*SIMULATE_PRESETS, *_ALIASES])


def sweep_preset_names() -> list[str]:
    return sorted(SWEEP_PRESETS)
