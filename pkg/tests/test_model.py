"""Closed-form physics: rate schedules, drive, critical coupling, EOM, steady states.

Frozen reference numbers were computed independently with 30-digit mpmath
arithmetic straight from the defining formulas.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import opendicke as od
from opendicke.model import TWO_PI

# schedules used throughout
WEAK_MARKOV = od.DissipationSchedule(kappa0=0.05, m=10.0)
NM = od.DissipationSchedule(kappa0=2.7, m=0.675, kappa_max=5.0)
CONST = od.DissipationSchedule(kappa0=0.05)

NM_ABS_D = 1.7858821349685986
NM_PERIOD = 7.0365061435480056
NM_FIRST_POLE = 2.163819675295176


class TestRegime:
    def test_markovian(self):
        assert od.regime_of(WEAK_MARKOV) is od.Regime.MARKOVIAN

    def test_non_markovian_quarter_width(self):
        sch = od.DissipationSchedule(kappa0=2.7, m=2.7 / 4, kappa_max=5.0)
        assert od.regime_of(sch) is od.Regime.NON_MARKOVIAN

    def test_critical_boundary(self):
        sch = od.DissipationSchedule(kappa0=2.7, m=5.4)
        assert od.regime_of(sch) is od.Regime.CRITICAL

    def test_constant_mode(self):
        assert od.regime_of(CONST) is od.Regime.CONSTANT_MARKOVIAN

    def test_branch_parameters_are_exclusive(self):
        assert WEAK_MARKOV.d == pytest.approx(math.sqrt(99.0), rel=1e-15)
        with pytest.raises(ValueError):
            WEAK_MARKOV.abs_d
        assert NM.abs_d == pytest.approx(NM_ABS_D, rel=1e-15)
        with pytest.raises(ValueError):
            NM.d

    def test_validation(self):
        with pytest.raises(ValueError):
            od.DissipationSchedule(kappa0=-0.1)
        with pytest.raises(ValueError):
            od.DissipationSchedule(kappa0=1.0, m=-2.0)
        with pytest.raises(ValueError):
            od.DissipationSchedule(kappa0=1.0, kappa_max=0.5)
        with pytest.raises(ValueError):  # non-Markovian rate has poles
            od.DissipationSchedule(kappa0=2.7, m=0.675)


class TestKappa:
    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            od.kappa_at(-1e-9, CONST)

    def test_zero_at_t0_for_nonconstant_modes(self):
        for sch in (WEAK_MARKOV, NM, od.DissipationSchedule(kappa0=2.7, m=5.4)):
            assert od.kappa_at(0.0, sch) == 0.0

    def test_constant_mode_everywhere(self):
        for t in (0.0, 0.3, 7.9, 1e4):
            assert od.kappa_at(t, CONST) == 0.05

    def test_markovian_point_value(self):
        # frozen: raw sinh/cosh form at t=1 evaluated with mpmath
        assert od.kappa_at(1.0, WEAK_MARKOV) == pytest.approx(0.050123242267067192, rel=1e-14)

    def test_markovian_long_time_limit(self):
        expected = 2 * 10 * 0.05 / (math.sqrt(99.0) + 10.0)
        assert od.kappa_at(1e3, WEAK_MARKOV) == pytest.approx(expected, abs=1e-6)
        assert od.kappa_at(1e3, WEAK_MARKOV) == pytest.approx(0.050125628933800453, rel=1e-14)

    def test_markovian_monotone_and_bounded(self):
        ts = np.linspace(0.0, 50.0, 2000)
        vals = np.array([od.kappa_at(t, WEAK_MARKOV) for t in ts])
        assert np.all(np.diff(vals) >= -1e-15)
        assert np.all(vals >= 0.0)
        assert np.all(vals <= 2 * 10 * 0.05 / (math.sqrt(99.0) + 10.0) + 1e-12)

    def test_no_overflow_at_huge_times(self):
        big = od.DissipationSchedule(kappa0=0.05, m=10.0)
        assert math.isfinite(od.kappa_at(1e8, big))

    def test_nm_point_value(self):
        # frozen: sin/cos form at t=1 evaluated with mpmath (unclipped there)
        assert od.kappa_at(1.0, NM) == pytest.approx(1.7251580623113426, rel=1e-13)

    def test_nm_pole_returns_clipped_value(self):
        assert od.kappa_at(NM_FIRST_POLE, NM) == 5.0
        # near-pole neighborhood stays clipped, literal rule returns +kappa_max
        assert od.kappa_at(NM_FIRST_POLE - 1e-6, NM) == 5.0
        assert od.kappa_at(NM_FIRST_POLE + 1e-6, NM) == 5.0

    def test_sign_preserving_mode(self):
        signed = od.DissipationSchedule(
            kappa0=2.7, m=0.675, kappa_max=5.0, clip_mode=od.ClipMode.SIGN_PRESERVING
        )
        assert od.kappa_at(NM_FIRST_POLE - 1e-6, signed) == 5.0
        assert od.kappa_at(NM_FIRST_POLE + 1e-6, signed) == -5.0
        assert od.kappa_at(NM_FIRST_POLE, signed) == 5.0  # exact pole: convention

    def test_nm_periodicity(self):
        ts = np.linspace(0.05, NM_PERIOD - 0.05, 401)
        for t in ts:
            a, b = od.kappa_at(t, NM), od.kappa_at(t + NM_PERIOD, NM)
            assert a == pytest.approx(b, abs=1e-9)

    def test_nm_attains_negative_values(self):
        ts = np.linspace(0.0, NM_PERIOD, 4001)
        vals = np.array([od.kappa_at(t, NM) for t in ts])
        assert vals.min() < 0.0
        assert np.all(np.abs(vals) <= 5.0 + 1e-12)

    def test_critical_limit_agreement(self):
        kappa0 = 2.7
        crit = od.DissipationSchedule(kappa0=kappa0, m=2 * kappa0)
        for shift in (1e-6, -1e-6):
            m = 2 * kappa0 * (1 + shift)
            near = od.DissipationSchedule(kappa0=kappa0, m=m, kappa_max=math.inf if m >= 2 * kappa0 else 1e6)
            for t in np.linspace(1e-3, 10.0 / kappa0, 50):
                a, b = od.kappa_at(t, near), od.kappa_at(t, crit)
                assert abs(a - b) <= 1e-4 * abs(b)

    def test_critical_closed_form(self):
        crit = od.DissipationSchedule(kappa0=2.7, m=5.4)
        for t in (0.1, 1.0, 25.0):
            assert od.kappa_at(t, crit) == pytest.approx(2 * 5.4 * 2.7 * t / (2 + 5.4 * t), rel=1e-14)

    @given(
        kappa0=st.floats(0.01, 5.0),
        ratio=st.floats(0.05, 5.0),
        extra=st.floats(0.1, 10.0),
        t=st.floats(0.0, 50.0),
        literal=st.booleans(),
    )
    def test_clipping_bound_property(self, kappa0, ratio, extra, t, literal):
        sch = od.DissipationSchedule(
            kappa0=kappa0,
            m=ratio * kappa0,
            kappa_max=kappa0 + extra,
            clip_mode=od.ClipMode.LITERAL if literal else od.ClipMode.SIGN_PRESERVING,
        )
        assert abs(od.kappa_at(t, sch)) <= sch.kappa_max + 1e-12


class TestNmPeriod:
    def test_quarter_width_value(self):
        assert od.nm_period(NM) == pytest.approx(NM_PERIOD, rel=1e-14)

    def test_equal_width_value(self):
        sch = od.DissipationSchedule(kappa0=2.7, m=2.7, kappa_max=5.0)
        assert od.nm_period(sch) == pytest.approx(4.6542113386515455, rel=1e-14)

    def test_diverges_at_regime_boundary(self):
        near = od.DissipationSchedule(kappa0=2.7, m=5.4 * (1 - 1e-12), kappa_max=50.0)
        assert od.nm_period(near) > 1e5

    def test_rejects_markovian(self):
        with pytest.raises(ValueError):
            od.nm_period(WEAK_MARKOV)


class TestCumulativeKappa:
    def test_zero_at_origin(self):
        assert od.cumulative_kappa(0.0, NM) == 0.0

    def test_constant_mode(self):
        assert od.cumulative_kappa(10.0, CONST) == pytest.approx(0.5, rel=1e-12)

    def test_nm_one_period_nonnegative_and_matches_riemann(self):
        t = NM_PERIOD
        val = od.cumulative_kappa(t, NM)
        assert val >= 0.0
        ts = np.linspace(0.0, t, 200_001)
        riemann = np.trapezoid([od.kappa_at(s, NM) for s in ts], ts)
        assert val == pytest.approx(riemann, abs=5e-4)

    def test_markovian_matches_riemann(self):
        t = 5.0
        val = od.cumulative_kappa(t, WEAK_MARKOV)
        ts = np.linspace(0.0, t, 50_001)
        riemann = np.trapezoid([od.kappa_at(s, WEAK_MARKOV) for s in ts], ts)
        assert val == pytest.approx(riemann, rel=1e-7)


class TestDrive:
    DRIVE = od.DriveProtocol(lambda0=1.0, omega_T=1.0, epsilon=0.02)

    def test_half_period_values(self):
        T = self.DRIVE.period
        assert od.drive_lambda_at(0.25 * T, self.DRIVE) == 1.0
        assert od.drive_lambda_at(0.75 * T, self.DRIVE) == 0.0
        assert od.drive_lambda_at(7.5 * T, self.DRIVE) == 0.0

    def test_switch_boundary_is_half_open(self):
        T = self.DRIVE.period
        assert od.drive_lambda_at(0.0, self.DRIVE) == 1.0
        assert od.drive_lambda_at(0.5 * T, self.DRIVE) == 0.0

    def test_periodicity(self):
        T = self.DRIVE.period
        for frac in (0.1, 0.25, 0.4, 0.6, 0.9):
            for k in (1, 3, 10):
                assert od.drive_lambda_at(frac * T + k * T, self.DRIVE) == od.drive_lambda_at(
                    frac * T, self.DRIVE
                )

    def test_period_frequency_product(self):
        for omega_T in (1.0, 0.892941067484, 2.7):
            drive = od.DriveProtocol(1.0, omega_T)
            assert drive.period * omega_T == pytest.approx(TWO_PI, rel=4e-16)

    def test_validation(self):
        with pytest.raises(ValueError):
            od.DriveProtocol(lambda0=-0.2, omega_T=1.0)
        with pytest.raises(ValueError):
            od.DriveProtocol(lambda0=1.0, omega_T=0.0)


class TestFrequencies:
    def test_detuning_sum_is_exact(self):
        for omega_T in (1.0, 0.918273, 2.5):
            for eps in (0.0, 0.02, 0.03, 0.07, 0.1):
                fr = od.ModelFrequencies.detuned(omega_T, eps)
                assert fr.omega + fr.omega0 == 2.0 * omega_T

    def test_zero_detuning(self):
        fr = od.ModelFrequencies.detuned(1.0, 0.0)
        assert fr.omega == fr.omega0 == 1.0

    def test_split_direction(self):
        fr = od.ModelFrequencies.detuned(1.0, 0.02)
        assert fr.omega == pytest.approx(0.98, rel=1e-15)
        assert fr.omega0 == pytest.approx(1.02, rel=1e-15)


class TestCriticalCoupling:
    def test_frozen_values(self):
        assert od.critical_coupling(1.0, 1.0, 0.0) == 0.5
        assert od.critical_coupling(1.0, 1.0, 0.05) == pytest.approx(0.50015622559356392, rel=1e-15)
        assert od.critical_coupling(1.0, 1.0, 2.7) == pytest.approx(0.84001488082057213, rel=1e-15)

    def test_rejects_nonpositive_frequencies(self):
        with pytest.raises(ValueError):
            od.critical_coupling(0.0, 1.0, 0.1)
        with pytest.raises(ValueError):
            od.critical_coupling(1.0, -1.0, 0.1)


class TestEomAndSteadyStates:
    FREQS = od.ModelFrequencies(1.0, 1.0)
    DRIVE = od.DriveProtocol(1.0, 1.0, 0.0)

    def test_normal_phase_is_fixed_point_of_both_variants(self):
        state = od.MeanFieldState.normal_phase()
        for variant in od.EomVariant:
            deriv = od.eom_rhs(state, 0.1, self.DRIVE, self.FREQS, 0.05, variant)
            assert np.max(np.abs(deriv.as_array())) == 0.0

    def test_closed_form_values(self):
        ss = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=1)
        assert ss.jx == pytest.approx(0.96820547952691194, rel=1e-14)
        assert ss.jy == 0.0
        assert ss.jz == pytest.approx(-0.25015625, rel=1e-14)
        assert ss.x == pytest.approx(-1.3683940740146457, rel=1e-14)
        assert ss.p == pytest.approx(-0.034209851850366143, rel=1e-14)

    def test_momentum_locks_to_damped_quadrature(self):
        ss = od.steady_state_closed_form(2.0, self.FREQS, 0.8, branch=-1)
        assert ss.p == pytest.approx(0.4 * ss.x, rel=1e-15)

    def test_branches_are_parity_partners(self):
        a = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=1)
        b = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=-1)
        assert (a.x, a.p, a.jx) == (-b.x, -b.p, -b.jx)
        assert (a.jy, a.jz) == (b.jy, b.jz)

    def test_boundary_collapses_to_normal_phase(self):
        lam_c = od.critical_coupling(1.0, 1.0, 0.05)
        ss = od.steady_state_closed_form(lam_c, self.FREQS, 0.05, branch=1)
        assert ss.x == ss.p == ss.jx == ss.jy == 0.0
        assert ss.jz == -1.0

    def test_strong_coupling_limit(self):
        ss = od.steady_state_closed_form(100.0, self.FREQS, 0.05, branch=1)
        assert abs(ss.jz) < 1e-4
        assert ss.jx == pytest.approx(1.0, abs=1e-8)

    def test_rejects_subcritical(self):
        with pytest.raises(ValueError):
            od.steady_state_closed_form(0.3, self.FREQS, 0.05, branch=1)
        with pytest.raises(ValueError):
            od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=2)

    def test_fixed_point_residual_grid(self):
        # consistent variant: exact fixed points across the superradiant grid
        for lambda0 in (0.9, 1.0, 2.0):
            for kappa0 in (0.0, 0.05, 2.7):
                for eps in (0.0, 0.02):
                    freqs = od.ModelFrequencies.detuned(1.0, eps)
                    if lambda0 <= od.critical_coupling(freqs.omega, freqs.omega0, kappa0):
                        continue
                    for branch in (1, -1):
                        ss = od.steady_state_closed_form(lambda0, freqs, kappa0, branch)
                        res = od.steady_state_residual(ss, lambda0, freqs, kappa0)
                        assert res < 1e-12

    def test_published_variant_residual_is_large(self):
        ss = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=1)
        res = od.steady_state_residual(ss, 1.0, self.FREQS, 0.05, od.EomVariant.AS_PUBLISHED)
        assert res > 1e-3

    @given(
        x=st.floats(-3, 3), p=st.floats(-3, 3),
        jx=st.floats(-1, 1), jy=st.floats(-1, 1), jz=st.floats(-1, 1),
        lam=st.floats(0, 2), kappa=st.floats(-5, 5),
        omega=st.floats(0.5, 2), omega0=st.floats(0.5, 2),
        published=st.booleans(),
    )
    def test_spin_norm_is_analytically_conserved(self, x, p, jx, jy, jz, lam, kappa, omega, omega0, published):
        from opendicke.model import rhs_scalar

        _, _, djx, djy, djz = rhs_scalar(
            x, p, jx, jy, jz, lam, omega, omega0, kappa, published
        )
        assert abs(jx * djx + jy * djy + jz * djz) < 1e-10


class TestNoise:
    def test_zero_amplitude_reduces_exactly(self):
        noise = od.NoiseProcess(od.NoiseSettings(a0=0.0, seed=3), resample_interval=0.25)
        for t in (0.0, 0.3, 5.0):
            assert od.noisy_kappa_at(t, NM, noise) == od.kappa_at(t, NM)

    def test_bounded_by_amplitude(self):
        noise = od.NoiseProcess(od.NoiseSettings(a0=0.5, seed=11), resample_interval=0.25)
        for t in np.linspace(0.0, 20.0, 200):
            base = od.kappa_at(t, NM)
            assert base - 0.5 <= od.noisy_kappa_at(t, NM, noise) <= base + 0.5

    def test_matches_independent_reimplementation(self):
        # oracle: same PRNG stream, scalar clip + piecewise-constant noise rebuilt inline
        a0, seed, dt = 0.5, 123, 0.25
        rng = np.random.default_rng(seed)
        draws = rng.uniform(-1.0, 1.0, 200)
        kappa0, m = 2.7, 0.675
        absd = math.sqrt(2 * m * kappa0 - m * m)
        kmax = 5.0

        def oracle(t):
            z = 0.5 * t * absd
            num = 2 * m * kappa0 * math.sin(z)
            den = absd * math.cos(z) + m * math.sin(z)
            base = kmax if abs(num) >= kmax * abs(den) else num / den
            return base + a0 * draws[int(t // dt)]

        noise = od.NoiseProcess(od.NoiseSettings(a0=a0, seed=seed), resample_interval=dt)
        for t in np.arange(0.125, 40.0, 0.4158):
            assert od.noisy_kappa_at(t, NM, noise) == pytest.approx(oracle(t), rel=1e-12, abs=1e-12)

    def test_reproducible_across_instances(self):
        a = od.NoiseProcess(od.NoiseSettings(a0=0.5, seed=42), resample_interval=0.5)
        b = od.NoiseProcess(od.NoiseSettings(a0=0.5, seed=42), resample_interval=0.5)
        ta = [a.value_at(t) for t in np.linspace(0, 30, 100)]
        tb = [b.value_at(t) for t in np.linspace(0, 30, 100)]
        assert ta == tb

    def test_draw_order_does_not_matter(self):
        a = od.NoiseProcess(od.NoiseSettings(a0=1.0, seed=7), resample_interval=1.0)
        b = od.NoiseProcess(od.NoiseSettings(a0=1.0, seed=7), resample_interval=1.0)
        forward = [a.draw(k) for k in range(10)]
        backward = [b.draw(k) for k in reversed(range(10))]
        assert forward == list(reversed(backward))

    def test_frozen_first_draws(self):
        # regression pin: PCG64(seed=123) uniform(-1, 1) leading draws
        proc = od.NoiseProcess(od.NoiseSettings(a0=1.0, seed=123), resample_interval=1.0)
        expected = np.random.default_rng(123).uniform(-1.0, 1.0, 4)
        assert proc.prefix(4) == pytest.approx(list(expected), rel=0, abs=0)

    def test_validation(self):
        with pytest.raises(ValueError):
            od.NoiseSettings(a0=-0.1)
        with pytest.raises(ValueError):
            od.NoiseProcess(od.NoiseSettings(a0=0.5, seed=0))  # no interval anywhere
