"""Mean-field simulator for time-crystalline order in the driven open Dicke model."""

__version__ = "0.1.0"

from .model import (
    ClipMode,
    DissipationSchedule,
    DriveProtocol,
    EomVariant,
    MeanFieldState,
    ModelFrequencies,
    NoiseProcess,
    NoiseSettings,
    Regime,
    critical_coupling,
    cumulative_kappa,
    drive_lambda_at,
    eom_rhs,
    kappa_at,
    nm_period,
    noisy_kappa_at,
    regime_of,
    steady_state_closed_form,
    steady_state_residual,
)
from .integrator import (
    NonFiniteStateError,
    RelaxationError,
    SimulationConfig,
    SimulationError,
    SpinNormDriftError,
    StroboscopicSequence,
    Trajectory,
    relax_to_steady_state,
    rk4_step,
    simulate,
)
from .analysis import (
    ClassifierThresholds,
    PhaseKind,
    PhaseLabel,
    classify,
    detect_period,
    geometry_estimate,
    intra_period_variance,
    parity_pairing_check,
)
from .sweep import AxisSpec, SweepSpec, SweepResult, resume_sweep, run_sweep

__all__ = [
    "__version__",
    "ClipMode",
    "DissipationSchedule",
    "DriveProtocol",
    "EomVariant",
    "MeanFieldState",
    "ModelFrequencies",
    "NoiseProcess",
    "NoiseSettings",
    "Regime",
    "critical_coupling",
    "cumulative_kappa",
    "drive_lambda_at",
    "eom_rhs",
    "kappa_at",
    "nm_period",
    "noisy_kappa_at",
    "regime_of",
    "steady_state_closed_form",
    "steady_state_residual",
    "NonFiniteStateError",
    "RelaxationError",
    "SimulationConfig",
    "SimulationError",
    "SpinNormDriftError",
    "StroboscopicSequence",
    "Trajectory",
    "relax_to_steady_state",
    "rk4_step",
    "simulate",
    "ClassifierThresholds",
    "PhaseKind",
    "PhaseLabel",
    "classify",
    "detect_period",
    "geometry_estimate",
    "intra_period_variance",
    "parity_pairing_check",
    "AxisSpec",
    "SweepSpec",
    "SweepResult",
    "resume_sweep",
    "run_sweep",
]
