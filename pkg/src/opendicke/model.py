"""Closed-form physics of the periodically driven, dissipative Dicke model.

In the large-N (mean-field) limit the cavity-plus-collective-spin dynamics
reduce to five real variables: the scaled cavity quadratures (x, p) and the
scaled collective spin (jx, jy, jz).  This module collects every closed form
the rest of the package builds on:

* the square-wave drive protocol lambda(t) and the detuned frequencies,
* the time-dependent cavity decay rate kappa(t) with its Markovian,
  non-Markovian, critical and constant regimes, including rate clipping
  at kappa_max and optional piecewise-constant random fluctuations,
* the superradiant critical coupling lambda_c,
* the mean-field equations of motion (two selectable sign/factor variants),
* the symmetry-broken steady states of the constant-drive flow.

Conventions: hbar = 1; frequencies are quoted in units of the drive frequency
omega_T unless stated otherwise.  All functions are pure; randomness enters
only through an explicit :class:`NoiseProcess`.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._jit import njit

TWO_PI = 2.0 * math.pi


class Regime(enum.Enum):
    """Qualitative behavior of the decay rate kappa(t)."""

    MARKOVIAN = "markovian"                 # m > 2*kappa0: kappa(t) >= 0, monotone
    NON_MARKOVIAN = "non_markovian"         # m < 2*kappa0: periodic, negative intervals
    CRITICAL = "critical"                   # m = 2*kappa0: algebraic approach to 2*kappa0
    CONSTANT_MARKOVIAN = "constant_markovian"  # infinite-spectral-width limit, kappa = kappa0


class ClipMode(enum.Enum):
    """How kappa(t) is replaced once its magnitude reaches kappa_max."""

    LITERAL = "literal"                  # always +kappa_max, even where kappa <= -kappa_max
    SIGN_PRESERVING = "sign_preserving"  # +/-kappa_max following the sign of the raw rate


class EomVariant(enum.Enum):
    """Sign/factor convention of the mean-field equations of motion.

    Two conventions of the coupled cavity-spin equations are in circulation.
    CONSISTENT is the unique assignment for which the closed-form
    symmetry-broken steady states and the critical coupling are exact fixed
    points of the flow; it is the default everywhere.  AS_PUBLISHED keeps the
    alternative coupling (flipped spin-drive sign and an extra factor 2x in
    the momentum equation) selectable for comparison; its residual at the
    closed-form steady state is nonzero.
    """

    CONSISTENT = "consistent"
    AS_PUBLISHED = "as_published"


# integer codes shared with the jitted kernels
_REGIME_CODE = {
    Regime.CONSTANT_MARKOVIAN: 0,
    Regime.MARKOVIAN: 1,
    Regime.CRITICAL: 2,
    Regime.NON_MARKOVIAN: 3,
}


@dataclass(frozen=True)
class MeanFieldState:
    """Scaled cavity quadratures (x, p) and collective spin (jx, jy, jz)."""

    x: float
    p: float
    jx: float
    jy: float
    jz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.p, self.jx, self.jy, self.jz], dtype=float)

    @classmethod
    def from_array(cls, a) -> "MeanFieldState":
        x, p, jx, jy, jz = (float(v) for v in a)
        return cls(x, p, jx, jy, jz)

    @classmethod
    def normal_phase(cls) -> "MeanFieldState":
        """Empty cavity, fully polarized spin: the fixed point below lambda_c."""
        return cls(0.0, 0.0, 0.0, 0.0, -1.0)

    def spin_norm(self) -> float:
        return math.sqrt(self.jx**2 + self.jy**2 + self.jz**2)


@dataclass(frozen=True)
class DriveProtocol:
    """Square-wave coupling: lambda0 for the first half period, 0 for the second.

    omega_T is the drive angular frequency; the period is T = 2*pi/omega_T.
    epsilon is the detuning error splitting the cavity and atomic frequencies
    around omega_T (see :meth:`ModelFrequencies.detuned`).
    """

    lambda0: float
    omega_T: float
    epsilon: float = 0.0

    def __post_init__(self):
        if self.lambda0 < 0.0:
            raise ValueError("lambda0 must be nonnegative")
        if self.omega_T <= 0.0:
            raise ValueError("omega_T must be positive")
        if self.epsilon >= 1.0:
            raise ValueError("epsilon must be below 1 (cavity frequency would vanish)")

    @property
    def period(self) -> float:
        return TWO_PI / self.omega_T

    def frequencies(self) -> "ModelFrequencies":
        return ModelFrequencies.detuned(self.omega_T, self.epsilon)


@dataclass(frozen=True)
class ModelFrequencies:
    """Cavity frequency omega and atomic transition frequency omega0."""

    omega: float
    omega0: float

    def __post_init__(self):
        if self.omega <= 0.0 or self.omega0 <= 0.0:
            raise ValueError("frequencies must be positive")

    @classmethod
    def detuned(cls, omega_T: float, epsilon: float) -> "ModelFrequencies":
        """omega = (1-eps)*omega_T, omega0 = (1+eps)*omega_T with an exact sum.

        omega0 is formed as 2*omega_T - omega so that omega + omega0 equals
        2*omega_T to the last bit regardless of rounding in eps*omega_T.
        """
        omega = omega_T - epsilon * omega_T
        return cls(omega=omega, omega0=2.0 * omega_T - omega)


@dataclass(frozen=True)
class DissipationSchedule:
    """Time profile of the cavity decay rate.

    m is the spectral width of the structured bath and kappa0 the bare rate;
    m=None selects the constant-rate mode kappa(t) = kappa0 (the infinite
    spectral width limit).  The rate is clipped whenever its magnitude reaches
    kappa_max; the non-Markovian branch has poles, so there a finite
    kappa_max is mandatory.
    """

    kappa0: float
    m: float | None = None
    kappa_max: float = math.inf
    clip_mode: ClipMode = ClipMode.LITERAL

    def __post_init__(self):
        if self.kappa0 < 0.0:
            raise ValueError("kappa0 must be nonnegative")
        if self.m is not None and self.m <= 0.0:
            raise ValueError("spectral width m must be positive (use m=None for constant rate)")
        if not self.kappa_max > self.kappa0:
            raise ValueError("kappa_max must exceed kappa0")
        if self.regime is Regime.NON_MARKOVIAN and not math.isfinite(self.kappa_max):
            raise ValueError("non-Markovian schedules require a finite kappa_max (the rate has poles)")

    @property
    def regime(self) -> Regime:
        if self.m is None:
            return Regime.CONSTANT_MARKOVIAN
        if self.m > 2.0 * self.kappa0:
            return Regime.MARKOVIAN
        if self.m < 2.0 * self.kappa0:
            return Regime.NON_MARKOVIAN
        return Regime.CRITICAL

    @property
    def d(self) -> float:
        """sqrt(m^2 - 2 m kappa0); defined on the Markovian side (0 at criticality)."""
        if self.regime not in (Regime.MARKOVIAN, Regime.CRITICAL):
            raise ValueError(f"d is undefined in the {self.regime.value} regime")
        return math.sqrt(self.m * self.m - 2.0 * self.m * self.kappa0)

    @property
    def abs_d(self) -> float:
        """sqrt(2 m kappa0 - m^2); defined in the non-Markovian regime only."""
        if self.regime is not Regime.NON_MARKOVIAN:
            raise ValueError(f"abs_d is undefined in the {self.regime.value} regime")
        return math.sqrt(2.0 * self.m * self.kappa0 - self.m * self.m)

    def rate_args(self) -> tuple:
        """Scalar argument pack consumed by the jitted kappa kernel."""
        regime = self.regime
        if regime is Regime.CONSTANT_MARKOVIAN:
            dval, m = 0.0, 0.0
        elif regime is Regime.NON_MARKOVIAN:
            dval, m = self.abs_d, self.m
        else:
            dval, m = self.d, self.m
        return (
            self.kappa0,
            m,
            dval,
            self.kappa_max,
            _REGIME_CODE[regime],
            self.clip_mode is ClipMode.LITERAL,
        )


@dataclass(frozen=True)
class NoiseSettings:
    """Amplitude, seed and resampling interval of the dissipation noise.

    resample_interval=None means "one draw per integrator step" and is
    resolved by the consumer that knows the step size.
    """

    a0: float = 0.0
    seed: int = 0
    resample_interval: float | None = None

    def __post_init__(self):
        if self.a0 < 0.0:
            raise ValueError("noise amplitude a0 must be nonnegative")
        if self.resample_interval is not None and self.resample_interval <= 0.0:
            raise ValueError("resample_interval must be positive")


class NoiseProcess:
    """Piecewise-constant uniform[-1, 1] fluctuation stream.

    Draw k applies on t in [k*dt, (k+1)*dt).  Draws come lazily from a single
    seeded PCG64 stream in index order, so identical (seed, dt) reproduce the
    sequence bit for bit regardless of query pattern.
    """

    def __init__(self, settings: NoiseSettings, resample_interval: float | None = None):
        dt = settings.resample_interval if settings.resample_interval is not None else resample_interval
        if dt is None or dt <= 0.0:
            raise ValueError("NoiseProcess needs a positive resample interval")
        self.settings = settings
        self.dt = float(dt)
        self._rng = np.random.default_rng(settings.seed)
        self._draws = np.empty(0, dtype=float)

    def _extend(self, n: int) -> None:
        if n > self._draws.size:
            fresh = self._rng.uniform(-1.0, 1.0, n - self._draws.size)
            self._draws = np.concatenate([self._draws, fresh])

    def draw(self, k: int) -> float:
        if k < 0:
            raise ValueError("draw index must be nonnegative")
        self._extend(k + 1)
        return float(self._draws[k])

    def prefix(self, n: int) -> np.ndarray:
        """First n draws as an array (the integrator's lookup table)."""
        self._extend(n)
        return self._draws[:n].copy()

    def value_at(self, t: float) -> float:
        """a0 * f(t); exactly 0.0 when a0 = 0 (no stream consumption)."""
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        if self.settings.a0 == 0.0:
            return 0.0
        return self.settings.a0 * self.draw(int(t // self.dt))


@njit(cache=True)
def kappa_scalar(t, kappa0, m, dval, kappa_max, regime_code, literal_clip):
    """Clipped decay rate at one time point (jit-compatible scalar core).

    Regime codes: 0 constant, 1 Markovian, 2 critical, 3 non-Markovian.
    The raw rate is kept as numerator/denominator so pole crossings clip
    cleanly instead of producing inf/NaN.
    """
    if regime_code == 0:
        return kappa0
    if regime_code == 1:
        z = 0.5 * t * dval
        grow = -math.expm1(-2.0 * z)  # 1 - exp(-2z), stable for all z >= 0
        num = 2.0 * m * kappa0 * grow
        den = dval * (1.0 + math.exp(-2.0 * z)) + m * grow
    elif regime_code == 2:
        num = 2.0 * m * kappa0 * t
        den = 2.0 + m * t
    else:
        z = 0.5 * t * dval
        s = math.sin(z)
        num = 2.0 * m * kappa0 * s
        den = dval * math.cos(z) + m * s
    if abs(num) >= kappa_max * abs(den):
        if literal_clip or den == 0.0:
            return kappa_max
        return kappa_max if (num >= 0.0) == (den > 0.0) else -kappa_max
    return num / den


@njit(cache=True)
def rhs_scalar(x, p, jx, jy, jz, lam, omega, omega0, kappa, as_published):
    """Mean-field time derivatives for one (state, coupling, rate) sample.

    CONSISTENT variant (as_published=False):
        dj/dt = (-omega0 e_z - 2 lam sqrt(2 omega) x e_x) x j
        dx/dt = p - (kappa/2) x
        dp/dt = -omega^2 x - (kappa/2) p - lam sqrt(2 omega) jx
    AS_PUBLISHED flips the spin-drive sign and uses -2 lam sqrt(2 omega) x jx
    in the momentum equation.
    """
    g = lam * math.sqrt(2.0 * omega)
    djx = omega0 * jy
    if as_published:
        djy = -omega0 * jx - 2.0 * g * x * jz
        djz = 2.0 * g * x * jy
        dp = -omega * omega * x - 0.5 * kappa * p - 2.0 * g * x * jx
    else:
        djy = -omega0 * jx + 2.0 * g * x * jz
        djz = -2.0 * g * x * jy
        dp = -omega * omega * x - 0.5 * kappa * p - g * jx
    dx = p - 0.5 * kappa * x
    return dx, dp, djx, djy, djz


def regime_of(schedule: DissipationSchedule) -> Regime:
    """Dissipation regime from the m vs 2*kappa0 comparison."""
    return schedule.regime


def kappa_at(t: float, schedule: DissipationSchedule) -> float:
    """Clipped decay rate kappa(t) for t >= 0."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return float(kappa_scalar(float(t), *schedule.rate_args()))


def noisy_kappa_at(t: float, schedule: DissipationSchedule, noise: NoiseProcess) -> float:
    """kappa(t) + a0*f(t); the fluctuation is added after clipping."""
    return kappa_at(t, schedule) + noise.value_at(t)


def nm_period(schedule: DissipationSchedule) -> float:
    """Oscillation period 4*pi/|d| of the non-Markovian rate."""
    return 2.0 * TWO_PI / schedule.abs_d


def _pole_times(schedule: DissipationSchedule, t_max: float) -> list[float]:
    """Times in (0, t_max) where the non-Markovian denominator vanishes."""
    dval = schedule.abs_d
    z0 = math.pi - math.atan(dval / schedule.m)  # first root of tan z = -dval/m in (0, pi)
    out = []
    k = 0
    while True:
        tk = 2.0 * (z0 + k * math.pi) / dval
        if tk >= t_max:
            break
        out.append(tk)
        k += 1
    return out


def cumulative_kappa(t: float, schedule: DissipationSchedule) -> float:
    """Integral of the clipped kappa over [0, t] by adaptive quadrature.

    Diagnostic for complete positivity (the integral must stay nonnegative).
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    regime = schedule.regime
    if regime is Regime.CONSTANT_MARKOVIAN:
        return schedule.kappa0 * t
    args = schedule.rate_args()
    edges = [0.0]
    if regime is Regime.NON_MARKOVIAN:
        edges.extend(_pole_times(schedule, t))
        # quarter-period marks keep quad subdivisions local to one oscillation
        quarter = 0.25 * nm_period(schedule)
        k = 1
        while k * quarter < t:
            edges.append(k * quarter)
            k += 1
    edges.append(t)
    edges = sorted(set(edges))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(lambda s: kappa_scalar(s, *args), a, b, limit=200)
        total += val
    return total


def drive_lambda_at(t: float, drive: DriveProtocol) -> float:
    """Square-wave coupling: lambda0 on [0, T/2), 0 on [T/2, T), repeated.

    Times within a few ulps of a switching point are snapped onto it, so a
    phase like 7.5*T lands in the second half period even though the product
    rounds below the exact switching time.
    """
    T = drive.period
    tau = math.fmod(t, T)
    if tau < 0.0:
        tau += T
    tol = 4.0 * sys.float_info.epsilon * max(abs(t), T)
    if tau >= T - tol:
        tau = 0.0
    if abs(tau - 0.5 * T) <= tol:
        return 0.0
    return drive.lambda0 if tau < 0.5 * T else 0.0


def critical_coupling(omega: float, omega0: float, kappa0: float) -> float:
    """Superradiant threshold lambda_c = (1/2) sqrt((omega0/omega)(omega^2 + kappa0^2/4))."""
    if omega <= 0.0 or omega0 <= 0.0:
        raise ValueError("frequencies must be positive")
    return 0.5 * math.sqrt((omega0 / omega) * (omega * omega + 0.25 * kappa0 * kappa0))


def eom_rhs(
    state: MeanFieldState,
    t: float,
    drive: DriveProtocol,
    freqs: ModelFrequencies,
    kappa_value: float,
    variant: EomVariant = EomVariant.CONSISTENT,
) -> MeanFieldState:
    """Time derivative of the mean-field state.

    kappa_value is supplied by the caller so the integrator stays in charge of
    noise sampling; the square-wave drive is evaluated at t.
    """
    lam = drive_lambda_at(t, drive)
    dx, dp, djx, djy, djz = rhs_scalar(
        state.x, state.p, state.jx, state.jy, state.jz,
        lam, freqs.omega, freqs.omega0, kappa_value,
        variant is EomVariant.AS_PUBLISHED,
    )
    return MeanFieldState(dx, dp, djx, djy, djz)


def steady_state_closed_form(
    lambda0: float,
    freqs: ModelFrequencies,
    kappa0: float,
    branch: int,
) -> MeanFieldState:
    """Symmetry-broken fixed point of the constant-drive flow.

    branch = +1/-1 selects one of the two parity partners; they map onto each
    other under (x, p, jx) -> -(x, p, jx).  Requires lambda0 >= lambda_c; at
    exact threshold the normal phase is returned.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    lam_c = critical_coupling(freqs.omega, freqs.omega0, kappa0)
    if lambda0 < lam_c:
        raise ValueError(
            f"no symmetry-broken steady state below the critical coupling "
            f"(lambda0={lambda0!r} < lambda_c={lam_c!r})"
        )
    r = (lam_c / lambda0) ** 2
    s_sq = max(1.0 - r * r, 0.0)
    x = -branch * lambda0 * math.sqrt(2.0 * freqs.omega * s_sq) / (freqs.omega**2 + 0.25 * kappa0**2)
    return MeanFieldState(
        x=x,
        p=0.5 * kappa0 * x,
        jx=branch * math.sqrt(s_sq),
        jy=0.0,
        jz=-r,
    )


def steady_state_residual(
    state: MeanFieldState,
    lambda0: float,
    freqs: ModelFrequencies,
    kappa0: float,
    variant: EomVariant = EomVariant.CONSISTENT,
) -> float:
    """Max-norm of the constant-drive flow at state (0 at a true fixed point)."""
    dx, dp, djx, djy, djz = rhs_scalar(
        state.x, state.p, state.jx, state.jy, state.jz,
        lambda0, freqs.omega, freqs.omega0, kappa0,
        variant is EomVariant.AS_PUBLISHED,
    )
    return max(abs(dx), abs(dp), abs(djx), abs(djy), abs(djz))
