"""Coarse (detuning, spectral width) phase diagram as ASCII art.

A reduced-resolution version of the full sweep: 9 x 9 grid, shorter runs.
The Markovian side (m > 2*kappa0) is uniformly a steady state; crossing the
dashed non-Markovian boundary the period-doubled phase and its neighbors
appear.  The full-resolution production sweep is `opendicke sweep --preset
fig3a`.
"""

import tempfile
from pathlib import Path

from opendicke.sweep import AxisSpec, SweepSpec, run_sweep

print(__doc__)

KAPPA0 = 2.7
GLYPH = {"TISS": ".", "DTC": "D", "PeriodN": "n", "LimitCycle": "o",
         "Thermal": "x", "Unresolved": "?"}

with tempfile.TemporaryDirectory() as tmp:
    spec = SweepSpec(
        axis1=AxisSpec("epsilon", 0.0, 0.10, 9),
        axis2=AxisSpec("m", 0.1 * KAPPA0, 3.0 * KAPPA0, 9),
        base={
            "lambda0": 1.0,
            "kappa0": KAPPA0,
            "kappa_max": 5.0,
            "periods_total": 400,
            "periods_recorded": 200,
            "steps_per_period": 1024,
            "norm_drift_tol": 1e-3,
        },
        checkpoint_path=str(Path(tmp) / "mini.checkpoint.csv"),
        workers=2,
    )
    result = run_sweep(spec)

eps_values = spec.axis1.values()
m_values = spec.axis2.values()
print("rows: m/kappa0 (top = deep non-Markovian), columns: epsilon")
print("      " + " ".join(f"{e:5.3f}" for e in eps_values))
for j, m in enumerate(m_values):
    row = [result.rows[i * 9 + j] for i in range(9)]
    glyphs = "     ".join(GLYPH.get(r["phase"], "?") for r in row)
    marker = " <- m = 2*kappa0 boundary below" if m > 2 * KAPPA0 and m_values[j - 1] < 2 * KAPPA0 else ""
    print(f"{m / KAPPA0:5.2f} {glyphs}{marker}")
print("\nlegend: " + ", ".join(f"{v} = {k}" for k, v in GLYPH.items()))
