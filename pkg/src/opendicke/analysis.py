"""Classification of long-time dynamics from stroboscopic and dense records.

The drive-period-sampled sequence is scanned for exact low periods first; the
aperiodic remainder is split by point-cloud geometry (a two-scale correlation
dimension plus nearest-neighbor spread) into closed-curve attractors and
scattered clouds.  Every threshold is carried explicitly so each label is
reproducible from the record plus the threshold set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .integrator import StroboscopicSequence, Trajectory
from .model import MeanFieldState


class PhaseKind(enum.Enum):
    TISS = "TISS"                # time-independent steady state
    DTC = "DTC"                  # period-doubled stroboscopic orbit
    PERIOD_N = "PeriodN"         # stroboscopic period n (n=1 synchronized orbit, n>=3 multiplets)
    LIMIT_CYCLE = "LimitCycle"   # aperiodic points on one or two closed curves
    THERMAL = "Thermal"          # scattered, irregular long-time dynamics
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class ClassifierThresholds:
    """All knobs of the decision cascade (recorded in every manifest)."""

    period_tol: float = 1e-3        # max-norm tolerance for exact-period detection
    p_max: int = 12                 # largest stroboscopic period searched
    tiss_variance: float = 1e-3     # dense intra-period movement separating TISS from a 1T orbit
    variance_window: int = 30       # periods of the dense record used for that variance
    dim_low: float = 0.5            # correlation-dimension band accepted as curve-like
    dim_high: float = 1.5
    nn_spread_max: float = 0.3      # max nearest-neighbor gap (normalized) for a closed curve
    parity_tol: float = 1e-2        # tolerance of the DTC parity-pairing diagnostic

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ClassifierThresholds":
        return cls(**d)


@dataclass(frozen=True)
class PhaseDiagnostics:
    detected_period: int | None = None
    cluster_count: int | None = None
    variance: float | None = None
    dimension: float | None = None
    nn_spread: float | None = None
    parity_ok: bool | None = None
    note: str = ""


@dataclass(frozen=True)
class PhaseLabel:
    kind: PhaseKind
    period: int | None
    diagnostics: PhaseDiagnostics

    def summary(self) -> str:
        if self.kind is PhaseKind.PERIOD_N:
            return f"{self.kind.value}({self.period})"
        return self.kind.value


def _points(points) -> np.ndarray:
    if isinstance(points, StroboscopicSequence):
        return points.states
    return np.asarray(points, dtype=float)


def detect_period(points, tol: float = 1e-3, p_max: int = 12) -> int | None:
    """Smallest p <= p_max with max_n ||s_{n+p} - s_n|| < tol over the window.

    Max-norm on the 5-component state; None when nothing locks.  The window
    must hold at least 4*p_max points.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    pts = _points(points)
    if pts.shape[0] < 4 * p_max:
        raise ValueError(f"window too short: {pts.shape[0]} points < 4*p_max = {4 * p_max}")
    for p in range(1, p_max + 1):
        if np.max(np.abs(pts[p:] - pts[:-p])) < tol:
            return p
    return None


def intra_period_variance(trajectory: Trajectory, last_k_periods: int = 30) -> float:
    """Largest max-norm excursion from the window-mean state, dense record.

    Separates a genuine fixed point (no motion at any time scale) from an
    orbit that returns once per period but moves in between.
    """
    if trajectory is None or len(trajectory) == 0:
        raise ValueError("dense record absent")
    spp = trajectory.manifest.get("steps_per_period")
    if spp is None:
        raise ValueError("trajectory manifest lacks steps_per_period")
    n = min(len(trajectory), last_k_periods * spp + 1)
    window = trajectory.states[-n:]
    mean = window.mean(axis=0)
    return float(np.max(np.abs(window - mean)))


def parity_pairing_check(cluster_a, cluster_b, tol: float = 1e-2) -> bool:
    """True iff the clusters are parity partners: (x, p, jx) -> -(x, p, jx),
    |jy| and jz unchanged, all within tol."""
    a = cluster_a.as_array() if isinstance(cluster_a, MeanFieldState) else np.asarray(cluster_a, dtype=float)
    b = cluster_b.as_array() if isinstance(cluster_b, MeanFieldState) else np.asarray(cluster_b, dtype=float)
    return bool(
        abs(a[0] + b[0]) < tol
        and abs(a[1] + b[1]) < tol
        and abs(a[2] + b[2]) < tol
        and abs(abs(a[3]) - abs(b[3])) < tol
        and abs(a[4] - b[4]) < tol
    )


def geometry_estimate(points, min_points: int = 200) -> tuple[float, float]:
    """(correlation-dimension estimate, max nearest-neighbor distance).

    Coordinates are centered and scaled to unit RMS radius first.  The
    dimension comes from two quantile radii of the pairwise-distance
    distribution: if the pair-count function grows like r^D then
    D = log(a2/a1) / log(q(a2)/q(a1)).  Curve-like clouds give ~1 with a small
    spread; scattered clouds give >= 2.  A degenerate cloud returns (0, 0).
    """
    pts = _points(points)
    if pts.shape[0] < min_points:
        raise ValueError(f"need at least {min_points} points, got {pts.shape[0]}")
    centered = pts - pts.mean(axis=0)
    scale = math.sqrt(float(np.mean(np.sum(centered**2, axis=1))))
    if scale < 1e-12:
        return 0.0, 0.0
    q = centered / scale
    dists = pdist(q)
    positive = dists[dists > 1e-12]
    if positive.size < 10:
        return 0.0, 0.0
    q1, q2 = np.quantile(positive, [0.05, 0.25])
    if q1 <= 0.0 or q2 / q1 <= 1.0 + 1e-9:
        dimension = 0.0
    else:
        dimension = math.log(0.25 / 0.05) / math.log(q2 / q1)
    full = squareform(dists)
    np.fill_diagonal(full, np.inf)
    nn_spread = float(np.max(np.min(full, axis=1)))
    return float(dimension), nn_spread


def classify(
    trajectory: Trajectory | None,
    strobe: StroboscopicSequence,
    thresholds: ClassifierThresholds = ClassifierThresholds(),
) -> PhaseLabel:
    """Decision cascade over the recorded dynamics.

    1. exact period 1 + no dense motion      -> TISS
    2. exact period 1 with dense motion      -> PeriodN(1) (drive-synchronized orbit)
    3. exact period 2                        -> DTC (parity pairing recorded, not required)
    4. exact period 3..p_max                 -> PeriodN(n)
    5. no period, curve-like geometry        -> LimitCycle
    6. no period, scattered / high dimension -> Thermal
    7. anything else                         -> Unresolved
    """
    pts = _points(strobe)
    try:
        period = detect_period(pts, tol=thresholds.period_tol, p_max=thresholds.p_max)
    except ValueError as exc:
        return PhaseLabel(PhaseKind.UNRESOLVED, None, PhaseDiagnostics(note=str(exc)))
    if period == 1:
        variance = intra_period_variance(trajectory, thresholds.variance_window)
        diag = PhaseDiagnostics(detected_period=1, cluster_count=1, variance=variance)
        if variance < thresholds.tiss_variance:
            return PhaseLabel(PhaseKind.TISS, None, diag)
        return PhaseLabel(
            PhaseKind.PERIOD_N,
            1,
            PhaseDiagnostics(
                detected_period=1,
                cluster_count=1,
                variance=variance,
                note="drive-synchronized period-1 orbit (moves within the period)",
            ),
        )
    if period == 2:
        even = pts[::2].mean(axis=0)
        odd = pts[1::2].mean(axis=0)
        parity = parity_pairing_check(even, odd, tol=thresholds.parity_tol)
        return PhaseLabel(
            PhaseKind.DTC,
            2,
            PhaseDiagnostics(detected_period=2, cluster_count=2, parity_ok=parity),
        )
    if period is not None:
        return PhaseLabel(
            PhaseKind.PERIOD_N,
            period,
            PhaseDiagnostics(detected_period=period, cluster_count=period),
        )
    try:
        dimension, nn_spread = geometry_estimate(pts)
    except ValueError as exc:
        return PhaseLabel(PhaseKind.UNRESOLVED, None, PhaseDiagnostics(note=str(exc)))
    diag = PhaseDiagnostics(dimension=dimension, nn_spread=nn_spread)
    if thresholds.dim_low <= dimension <= thresholds.dim_high and nn_spread < thresholds.nn_spread_max:
        return PhaseLabel(PhaseKind.LIMIT_CYCLE, None, diag)
    if dimension > thresholds.dim_high or nn_spread >= thresholds.nn_spread_max:
        return PhaseLabel(PhaseKind.THERMAL, None, diag)
    return PhaseLabel(
        PhaseKind.UNRESOLVED,
        None,
        PhaseDiagnostics(
            dimension=dimension,
            nn_spread=nn_spread,
            note="no exact period and geometry below the curve-like band",
        ),
    )
