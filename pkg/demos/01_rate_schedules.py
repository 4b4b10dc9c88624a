"""Tour of the dissipation-rate schedules.

The decay rate kappa(t) is controlled by the bare strength kappa0 and the
bath spectral width m.  Wide baths (m > 2*kappa0) give a memoryless, monotone
rate; narrow baths (m < 2*kappa0) give an oscillatory rate that spends part
of every cycle NEGATIVE - the hallmark of information back-flow - and has
poles that the kappa_max clipping bound tames.
"""

import numpy as np

import opendicke as od

print(__doc__)

markov = od.DissipationSchedule(kappa0=0.05, m=10.0)
nm = od.DissipationSchedule(kappa0=2.7, m=2.7 / 4, kappa_max=5.0)
const = od.DissipationSchedule(kappa0=0.05)

print(f"m=10, kappa0=0.05      -> {od.regime_of(markov).value}")
print(f"m=kappa0/4, kappa0=2.7 -> {od.regime_of(nm).value}")
print(f"m=None                 -> {od.regime_of(const).value}")

limit = 2 * 10 * 0.05 / (markov.d + 10)
print(f"\nMarkovian rate rises from 0 toward 2*m*kappa0/(d+m) = {limit:.6f}:")
for t in (0.0, 0.5, 2.0, 10.0, 1000.0):
    print(f"  kappa({t:6.1f}) = {od.kappa_at(t, markov):.6f}")

period = od.nm_period(nm)
print(f"\nNon-Markovian rate repeats every T_NM = 4*pi/|d| = {period:.4f}:")
ts = np.linspace(0.0, period, 2001)
vals = np.array([od.kappa_at(t, nm) for t in ts])
print(f"  min {vals.min():+.3f} (negative: back-flow), max {vals.max():+.3f} (clipped at 5)")
print(f"  fraction of the period clipped: {(vals == 5.0).mean():.0%}")
print(f"  integral over one period: {od.cumulative_kappa(period, nm):+.4f} (must stay >= 0)")

noise = od.NoiseProcess(od.NoiseSettings(a0=0.5, seed=1), resample_interval=period / 64)
print("\nNoisy rate kappa(t) + a0*f(t), a0=0.5, piecewise-constant f in [-1, 1]:")
for t in (0.3, 1.1, 2.6):
    print(f"  kappa'({t}) = {od.noisy_kappa_at(t, nm, noise):+.4f}  (clean {od.kappa_at(t, nm):+.4f})")
