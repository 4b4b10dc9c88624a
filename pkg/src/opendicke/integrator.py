"""Fixed-step RK4 integration of the driven mean-field equations.

The step grid is aligned with every drive discontinuity (t = n T/2) and with
the noise resampling boundaries, so each step integrates a smooth piece of the
flow: steps_per_period must be even and the resample interval an integer
multiple of the step.  The coupling lambda and the noise value are frozen over
a step; the deterministic part of kappa(t) is evaluated at each RK4 substage
time.  The spin norm is never renormalized - its drift is the built-in
integrator diagnostic and aborts the run past a configurable tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ._jit import njit
from .model import (
    TWO_PI,
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
    kappa_scalar,
    rhs_scalar,
    steady_state_closed_form,
)


class SimulationError(RuntimeError):
    """Base class for integration failures."""


class NonFiniteStateError(SimulationError):
    pass


class SpinNormDriftError(SimulationError):
    pass


class RelaxationError(SimulationError):
    """Constant-drive relaxation failed to reach a fixed point."""


@dataclass(frozen=True)
class SimulationConfig:
    """Everything simulate() needs, validated at construction.

    initial is either an explicit MeanFieldState or +1/-1 selecting a
    symmetry-broken steady-state branch (resolved with the schedule's kappa0).
    The last periods_recorded periods are recorded stroboscopically, and also
    densely when record_dense is set.
    """

    drive: DriveProtocol
    schedule: DissipationSchedule
    freqs: ModelFrequencies | None = None
    noise: NoiseSettings | None = None
    variant: EomVariant = EomVariant.CONSISTENT
    initial: MeanFieldState | int = 1
    periods_total: int = 1000
    periods_recorded: int = 200
    steps_per_period: int = 4096
    record_dense: bool = True
    norm_drift_tol: float = 1e-6

    def __post_init__(self):
        if self.steps_per_period < 2 or self.steps_per_period % 2 != 0:
            raise ValueError("steps_per_period must be even (drive switches at T/2)")
        if self.periods_total < 1:
            raise ValueError("periods_total must be positive")
        if not 0 <= self.periods_recorded <= self.periods_total:
            raise ValueError("periods_recorded must lie in [0, periods_total]")
        if isinstance(self.initial, int) and self.initial not in (1, -1):
            raise ValueError("initial branch must be +1 or -1")
        if self.norm_drift_tol <= 0.0:
            raise ValueError("norm_drift_tol must be positive")
        if self.freqs is None:
            object.__setattr__(self, "freqs", self.drive.frequencies())
        self.noise_stride()  # validates resample alignment

    @property
    def step_size(self) -> float:
        return self.drive.period / self.steps_per_period

    def noise_stride(self) -> int:
        """Steps per noise draw; 1 when noise is off."""
        if self.noise is None or self.noise.a0 == 0.0:
            return 1
        dt = self.noise.resample_interval
        if dt is None:
            return 1
        h = self.step_size
        stride = round(dt / h)
        if stride < 1 or abs(stride * h - dt) > 1e-9 * max(dt, h):
            raise ValueError(
                f"noise resample_interval {dt!r} is not an integer multiple "
                f"of the step size {h!r}"
            )
        return stride

    def initial_state(self) -> MeanFieldState:
        if isinstance(self.initial, MeanFieldState):
            return self.initial
        return steady_state_closed_form(
            self.drive.lambda0, self.freqs, self.schedule.kappa0, self.initial
        )


@dataclass
class Trajectory:
    """Densely sampled record over the recording window (absolute times)."""

    t: np.ndarray        # (N,)
    states: np.ndarray   # (N, 5) columns x, p, jx, jy, jz
    kappa: np.ndarray    # (N,) effective (clipped + noise) rate at each sample
    lam: np.ndarray      # (N,) drive coupling at each sample
    manifest: dict

    def __len__(self) -> int:
        return self.t.size

    @property
    def x(self):
        return self.states[:, 0]

    @property
    def p(self):
        return self.states[:, 1]

    @property
    def jx(self):
        return self.states[:, 2]

    @property
    def jy(self):
        return self.states[:, 3]

    @property
    def jz(self):
        return self.states[:, 4]


@dataclass
class StroboscopicSequence:
    """State sampled once per drive period, at t = n T."""

    period_index: np.ndarray  # (M,)
    states: np.ndarray        # (M, 5)
    manifest: dict

    def __len__(self) -> int:
        return self.period_index.size


@njit(cache=True)
def _integrate_kernel(
    x, p, jx, jy, jz,
    periods_total, spp, h, half_steps,
    lambda0, omega, omega0,
    kappa0, m, dval, kappa_max, regime_code, literal_clip,
    as_published,
    a0, draws, stride,
    rec_start, record_dense, norm_tol,
):
    total_steps = periods_total * spp
    rec0 = rec_start * spp
    n_dense = (total_steps - rec0 + 1) if record_dense else 0
    dense = np.zeros((n_dense, 8))
    strobe = np.zeros((periods_total - rec_start + 1, 5))
    norm0 = math.sqrt(jx * jx + jy * jy + jz * jz)
    max_drift = 0.0
    status = 0
    dense_filled = 0
    strobe_filled = 0
    for n in range(total_steps + 1):
        t = n * h
        in_period = n % spp
        lam = lambda0 if in_period < half_steps else 0.0
        noise_val = a0 * draws[n // stride] if a0 > 0.0 else 0.0
        if n >= rec0:
            if record_dense:
                row = n - rec0
                dense[row, 0] = t
                dense[row, 1] = x
                dense[row, 2] = p
                dense[row, 3] = jx
                dense[row, 4] = jy
                dense[row, 5] = jz
                dense[row, 6] = (
                    kappa_scalar(t, kappa0, m, dval, kappa_max, regime_code, literal_clip)
                    + noise_val
                )
                dense[row, 7] = lam
                dense_filled = row + 1
            if in_period == 0:
                srow = n // spp - rec_start
                strobe[srow, 0] = x
                strobe[srow, 1] = p
                strobe[srow, 2] = jx
                strobe[srow, 3] = jy
                strobe[srow, 4] = jz
                strobe_filled = srow + 1
        if n == total_steps:
            break
        ka = kappa_scalar(t, kappa0, m, dval, kappa_max, regime_code, literal_clip) + noise_val
        kb = kappa_scalar(t + 0.5 * h, kappa0, m, dval, kappa_max, regime_code, literal_clip) + noise_val
        kc = kappa_scalar(t + h, kappa0, m, dval, kappa_max, regime_code, literal_clip) + noise_val
        a1x, a1p, a1jx, a1jy, a1jz = rhs_scalar(x, p, jx, jy, jz, lam, omega, omega0, ka, as_published)
        bx = x + 0.5 * h * a1x
        bp = p + 0.5 * h * a1p
        bjx = jx + 0.5 * h * a1jx
        bjy = jy + 0.5 * h * a1jy
        bjz = jz + 0.5 * h * a1jz
        a2x, a2p, a2jx, a2jy, a2jz = rhs_scalar(bx, bp, bjx, bjy, bjz, lam, omega, omega0, kb, as_published)
        cx = x + 0.5 * h * a2x
        cp = p + 0.5 * h * a2p
        cjx = jx + 0.5 * h * a2jx
        cjy = jy + 0.5 * h * a2jy
        cjz = jz + 0.5 * h * a2jz
        a3x, a3p, a3jx, a3jy, a3jz = rhs_scalar(cx, cp, cjx, cjy, cjz, lam, omega, omega0, kb, as_published)
        ex = x + h * a3x
        ep = p + h * a3p
        ejx = jx + h * a3jx
        ejy = jy + h * a3jy
        ejz = jz + h * a3jz
        a4x, a4p, a4jx, a4jy, a4jz = rhs_scalar(ex, ep, ejx, ejy, ejz, lam, omega, omega0, kc, as_published)
        sixth = h / 6.0
        x = x + sixth * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
        p = p + sixth * (a1p + 2.0 * a2p + 2.0 * a3p + a4p)
        jx = jx + sixth * (a1jx + 2.0 * a2jx + 2.0 * a3jx + a4jx)
        jy = jy + sixth * (a1jy + 2.0 * a2jy + 2.0 * a3jy + a4jy)
        jz = jz + sixth * (a1jz + 2.0 * a2jz + 2.0 * a3jz + a4jz)
        if not (
            math.isfinite(x)
            and math.isfinite(p)
            and math.isfinite(jx)
            and math.isfinite(jy)
            and math.isfinite(jz)
        ):
            status = 1
            break
        drift = abs(math.sqrt(jx * jx + jy * jy + jz * jz) - norm0)
        if drift > max_drift:
            max_drift = drift
        if drift > norm_tol:
            status = 2
            break
    return status, dense, dense_filled, strobe, strobe_filled, max_drift, x, p, jx, jy, jz


@njit(cache=True)
def _relax_kernel(
    x, p, jx, jy, jz,
    lam, omega, omega0, kappa0, as_published,
    h, block_steps, tol, max_blocks,
):
    for _ in range(max_blocks):
        px, pp, pjx, pjy, pjz = x, p, jx, jy, jz
        for _ in range(block_steps):
            a1x, a1p, a1jx, a1jy, a1jz = rhs_scalar(x, p, jx, jy, jz, lam, omega, omega0, kappa0, as_published)
            bx = x + 0.5 * h * a1x
            bp = p + 0.5 * h * a1p
            bjx = jx + 0.5 * h * a1jx
            bjy = jy + 0.5 * h * a1jy
            bjz = jz + 0.5 * h * a1jz
            a2x, a2p, a2jx, a2jy, a2jz = rhs_scalar(bx, bp, bjx, bjy, bjz, lam, omega, omega0, kappa0, as_published)
            cx = x + 0.5 * h * a2x
            cp = p + 0.5 * h * a2p
            cjx = jx + 0.5 * h * a2jx
            cjy = jy + 0.5 * h * a2jy
            cjz = jz + 0.5 * h * a2jz
            a3x, a3p, a3jx, a3jy, a3jz = rhs_scalar(cx, cp, cjx, cjy, cjz, lam, omega, omega0, kappa0, as_published)
            ex = x + h * a3x
            ep = p + h * a3p
            ejx = jx + h * a3jx
            ejy = jy + h * a3jy
            ejz = jz + h * a3jz
            a4x, a4p, a4jx, a4jy, a4jz = rhs_scalar(ex, ep, ejx, ejy, ejz, lam, omega, omega0, kappa0, as_published)
            sixth = h / 6.0
            x = x + sixth * (a1x + 2.0 * a2x + 2.0 * a3x + a4x)
            p = p + sixth * (a1p + 2.0 * a2p + 2.0 * a3p + a4p)
            jx = jx + sixth * (a1jx + 2.0 * a2jx + 2.0 * a3jx + a4jx)
            jy = jy + sixth * (a1jy + 2.0 * a2jy + 2.0 * a3jy + a4jy)
            jz = jz + sixth * (a1jz + 2.0 * a2jz + 2.0 * a3jz + a4jz)
        if not (math.isfinite(x) and math.isfinite(p) and math.isfinite(jx)):
            return -1, x, p, jx, jy, jz
        diff = max(abs(x - px), abs(p - pp), abs(jx - pjx), abs(jy - pjy), abs(jz - pjz))
        if diff < tol:
            return 1, x, p, jx, jy, jz
    return 0, x, p, jx, jy, jz


def rk4_step(state: MeanFieldState, t: float, h: float, rhs) -> MeanFieldState:
    """One classical fourth-order step of rhs(state, t) -> MeanFieldState."""
    if h <= 0.0:
        raise ValueError("step size must be positive")
    s = state.as_array()
    k1 = rhs(state, t).as_array()
    k2 = rhs(MeanFieldState.from_array(s + 0.5 * h * k1), t + 0.5 * h).as_array()
    k3 = rhs(MeanFieldState.from_array(s + 0.5 * h * k2), t + 0.5 * h).as_array()
    k4 = rhs(MeanFieldState.from_array(s + h * k3), t + h).as_array()
    out = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NonFiniteStateError(f"non-finite state after step at t={t!r}")
    return MeanFieldState.from_array(out)


def _base_manifest(config: SimulationConfig) -> dict:
    from . import __version__

    schedule = config.schedule
    manifest = {
        "version": __version__,
        "lambda0": config.drive.lambda0,
        "omega_T": config.drive.omega_T,
        "epsilon": config.drive.epsilon,
        "T": config.drive.period,
        "omega": config.freqs.omega,
        "omega0": config.freqs.omega0,
        "lambda_c": critical_coupling(config.freqs.omega, config.freqs.omega0, schedule.kappa0),
        "kappa0": schedule.kappa0,
        "m": schedule.m,
        "kappa_max": schedule.kappa_max,
        "clip_mode": schedule.clip_mode.value,
        "regime": schedule.regime.value,
        "a0": config.noise.a0 if config.noise else 0.0,
        "seed": config.noise.seed if config.noise else None,
        "resample_interval": config.noise.resample_interval if config.noise else None,
        "variant": config.variant.value,
        "periods_total": config.periods_total,
        "periods_recorded": config.periods_recorded,
        "steps_per_period": config.steps_per_period,
        "record_dense": config.record_dense,
        "norm_drift_tol": config.norm_drift_tol,
        "step_size": config.step_size,
    }
    if schedule.regime is Regime.NON_MARKOVIAN:
        manifest["abs_d"] = schedule.abs_d
    elif schedule.regime in (Regime.MARKOVIAN, Regime.CRITICAL):
        manifest["d"] = schedule.d
    return manifest


def simulate(config: SimulationConfig) -> tuple[Trajectory, StroboscopicSequence]:
    """Integrate periods_total drive periods and return the recorded windows.

    Raises NonFiniteStateError / SpinNormDriftError when the run degenerates;
    the state is deliberately never projected back onto the spin sphere.
    """
    state = config.initial_state()
    lam_c = critical_coupling(config.freqs.omega, config.freqs.omega0, config.schedule.kappa0)
    if config.drive.lambda0 <= lam_c:
        warnings.warn(
            f"lambda0={config.drive.lambda0} does not exceed lambda_c={lam_c:.6g}; "
            "the period-doubling protocol assumes the superradiant regime",
            stacklevel=2,
        )
    stride = config.noise_stride()
    total_steps = config.periods_total * config.steps_per_period
    if config.noise is not None and config.noise.a0 > 0.0:
        process = NoiseProcess(config.noise, resample_interval=config.step_size)
        draws = process.prefix(total_steps // stride + 1)
        a0 = config.noise.a0
    else:
        draws = np.zeros(1)
        a0 = 0.0
    rec_start = config.periods_total - config.periods_recorded
    status, dense, n_dense, strobe, n_strobe, max_drift, *tail = _integrate_kernel(
        state.x, state.p, state.jx, state.jy, state.jz,
        config.periods_total, config.steps_per_period, config.step_size,
        config.steps_per_period // 2,
        config.drive.lambda0, config.freqs.omega, config.freqs.omega0,
        *config.schedule.rate_args(),
        config.variant is EomVariant.AS_PUBLISHED,
        a0, draws, stride,
        rec_start, config.record_dense, config.norm_drift_tol,
    )
    if status == 1:
        raise NonFiniteStateError("state became non-finite during integration")
    if status == 2:
        raise SpinNormDriftError(
            f"spin norm drifted by more than {config.norm_drift_tol} "
            f"(max drift {max_drift:.3e})"
        )
    manifest = _base_manifest(config)
    manifest["initial_state"] = list(state.as_array())
    manifest["max_spin_norm_drift"] = max_drift
    trajectory = Trajectory(
        t=dense[:n_dense, 0].copy(),
        states=dense[:n_dense, 1:6].copy(),
        kappa=dense[:n_dense, 6].copy(),
        lam=dense[:n_dense, 7].copy(),
        manifest=manifest,
    )
    sequence = StroboscopicSequence(
        period_index=np.arange(rec_start, rec_start + n_strobe),
        states=strobe[:n_strobe].copy(),
        manifest=manifest,
    )
    return trajectory, sequence


def relax_to_steady_state(
    initial: MeanFieldState,
    lambda0: float,
    freqs: ModelFrequencies,
    kappa0: float,
    variant: EomVariant = EomVariant.CONSISTENT,
    tol: float = 1e-12,
    max_time: float = 2e5,
    steps_per_cycle: int = 1024,
) -> MeanFieldState:
    """Integrate the constant-(lambda0, kappa0) flow until it stops moving.

    Convergence means the state changes by less than tol (max-norm) over one
    cavity cycle.  Serves as the brute-force oracle for the closed-form steady
    states; purely oscillatory dynamics raise RelaxationError.
    """
    cycle = TWO_PI / freqs.omega
    h = cycle / steps_per_cycle
    max_blocks = max(1, int(max_time / cycle))
    flag, x, p, jx, jy, jz = _relax_kernel(
        initial.x, initial.p, initial.jx, initial.jy, initial.jz,
        lambda0, freqs.omega, freqs.omega0, kappa0,
        variant is EomVariant.AS_PUBLISHED,
        h, steps_per_cycle, tol, max_blocks,
    )
    if flag == -1:
        raise NonFiniteStateError("constant-drive relaxation diverged")
    if flag == 0:
        raise RelaxationError(
            f"no fixed point reached within t={max_time} "
            "(dynamics may be oscillatory or chaotic)"
        )
    return MeanFieldState(x, p, jx, jy, jz)
