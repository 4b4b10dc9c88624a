"""Integration: RK4 oracles, recording layout, determinism, convergence order."""

import math

import numpy as np
import pytest

import opendicke as od
from opendicke.integrator import _integrate_kernel
from opendicke.model import rhs_scalar


def make_config(**overrides):
    # structural tests run at coarse resolution, where the norm-drift
    # diagnostic (6th order in the step) is orders above the strict default
    defaults = dict(
        drive=od.DriveProtocol(1.0, 1.0, 0.02),
        schedule=od.DissipationSchedule(kappa0=0.05),
        periods_total=20,
        periods_recorded=10,
        steps_per_period=256,
        record_dense=True,
        norm_drift_tol=0.5,
    )
    defaults.update(overrides)
    return od.SimulationConfig(**defaults)


class TestRk4Step:
    def test_zero_rhs_keeps_state(self):
        state = od.MeanFieldState(0.3, -0.2, 0.1, 0.4, -0.5)
        zero = lambda s, t: od.MeanFieldState(0, 0, 0, 0, 0)
        assert od.rk4_step(state, 0.0, 0.1, zero) == state

    def test_spin_precession_returns_after_full_turn(self):
        # lambda = 0, kappa = 0, omega0 = 1: jx + i jy rotates at unit frequency
        drive = od.DriveProtocol(0.0, 1.0, 0.0)
        freqs = od.ModelFrequencies(1.0, 1.0)
        rhs = lambda s, t: od.eom_rhs(s, t, drive, freqs, 0.0)
        state = od.MeanFieldState(0.0, 0.0, 0.8, 0.0, 0.6)
        h = 2 * math.pi / 4096
        for k in range(4096):
            state = od.rk4_step(state, k * h, h, rhs)
        assert state.jx == pytest.approx(0.8, abs=1e-10)
        assert state.jy == pytest.approx(0.0, abs=1e-10)
        assert state.jz == pytest.approx(0.6, abs=1e-12)

    def test_spin_precession_half_turn_flips(self):
        drive = od.DriveProtocol(0.0, 1.0, 0.0)
        freqs = od.ModelFrequencies(1.0, 1.0)
        rhs = lambda s, t: od.eom_rhs(s, t, drive, freqs, 0.0)
        state = od.MeanFieldState(0.0, 0.0, 0.8, 0.0, 0.6)
        h = math.pi / 2048
        for k in range(2048):
            state = od.rk4_step(state, k * h, h, rhs)
        assert state.jx == pytest.approx(-0.8, abs=1e-10)

    def test_damped_oscillator_matches_closed_form(self):
        # lambda = 0, constant kappa: x(t) = e^{-kt/2}(x0 cos wt + (p0/w) sin wt)
        kappa, omega = 0.3, 1.7
        drive = od.DriveProtocol(0.0, 1.0, 0.0)
        freqs = od.ModelFrequencies(omega, 1.0)
        rhs = lambda s, t: od.eom_rhs(s, t, drive, freqs, kappa)
        x0, p0 = 1.2, -0.4
        state = od.MeanFieldState(x0, p0, 0.0, 0.0, -1.0)
        t_end, n = 10.0, 8192
        h = t_end / n
        for k in range(n):
            state = od.rk4_step(state, k * h, h, rhs)
        damp = math.exp(-0.5 * kappa * t_end)
        x_exact = damp * (x0 * math.cos(omega * t_end) + (p0 / omega) * math.sin(omega * t_end))
        p_exact = damp * (p0 * math.cos(omega * t_end) - x0 * omega * math.sin(omega * t_end))
        assert state.x == pytest.approx(x_exact, abs=1e-8)
        assert state.p == pytest.approx(p_exact, abs=1e-8)

    def test_rejects_bad_step_and_nonfinite(self):
        state = od.MeanFieldState(0, 0, 0, 0, -1)
        with pytest.raises(ValueError):
            od.rk4_step(state, 0.0, -0.1, lambda s, t: s)
        blow = lambda s, t: od.MeanFieldState(math.nan, 0, 0, 0, 0)
        with pytest.raises(od.NonFiniteStateError):
            od.rk4_step(state, 0.0, 0.1, blow)


class TestSimulate:
    def test_record_layout(self):
        config = make_config(periods_total=5, periods_recorded=3, steps_per_period=64)
        traj, strobe = od.simulate(config)
        T, h = config.drive.period, config.step_size
        assert len(traj) == 3 * 64 + 1
        assert traj.t[0] == pytest.approx(2 * T, rel=1e-12)
        assert np.allclose(np.diff(traj.t), h, rtol=1e-9)
        assert list(strobe.period_index) == [2, 3, 4, 5]
        assert np.array_equal(strobe.states[0], traj.states[0])
        assert np.array_equal(strobe.states[-1], traj.states[-1])
        # drive column: first half period lambda0, second half 0
        assert traj.lam[0] == 1.0
        assert traj.lam[32] == 0.0
        assert traj.kappa[0] == pytest.approx(0.05)

    def test_no_dense_record(self):
        config = make_config(record_dense=False)
        traj, strobe = od.simulate(config)
        assert len(traj) == 0
        assert len(strobe) == config.periods_recorded + 1

    def test_determinism_bit_identical(self):
        config = make_config(
            schedule=od.DissipationSchedule(kappa0=2.7, m=0.675, kappa_max=5.0),
            noise=od.NoiseSettings(a0=0.5, seed=9),
            periods_total=12,
            periods_recorded=6,
        )
        t1, s1 = od.simulate(config)
        t2, s2 = od.simulate(config)
        assert np.array_equal(t1.states, t2.states)
        assert np.array_equal(t1.kappa, t2.kappa)
        assert np.array_equal(s1.states, s2.states)

    def test_matches_generic_rk4_with_kernel_semantics(self):
        # python reference: lambda frozen per step, kappa per substage, no noise
        config = make_config(
            drive=od.DriveProtocol(1.0, 1.0, 0.02),
            schedule=od.DissipationSchedule(kappa0=2.7, m=0.675, kappa_max=5.0),
            periods_total=2,
            periods_recorded=0,
            steps_per_period=64,
        )
        traj, strobe = od.simulate(config)
        rate_args = config.schedule.rate_args()
        from opendicke.model import kappa_scalar

        h = config.step_size
        spp = config.steps_per_period
        state = config.initial_state().as_array()
        freqs = config.freqs
        for n in range(config.periods_total * spp):
            lam = 1.0 if (n % spp) < spp // 2 else 0.0
            t = n * h

            def rhs(s, ts):
                k = kappa_scalar(ts, *rate_args)
                return od.MeanFieldState(*rhs_scalar(s.x, s.p, s.jx, s.jy, s.jz,
                                                     lam, freqs.omega, freqs.omega0, k, False))

            state = od.rk4_step(od.MeanFieldState.from_array(state), t, h, rhs).as_array()
        assert np.max(np.abs(state - strobe.states[-1])) < 1e-12

    def test_ideal_dtc_parity_alternation(self):
        config = od.SimulationConfig(
            drive=od.DriveProtocol(1.0, 1.0, 0.0),
            schedule=od.DissipationSchedule(kappa0=0.0),
            periods_total=60,
            periods_recorded=60,
            steps_per_period=4096,
            record_dense=False,
        )
        traj, strobe = od.simulate(config)
        s = strobe.states
        assert np.max(np.abs(s[::2] - s[0])) < 1e-6
        odd = s[1::2]
        assert np.max(np.abs(odd[:, :3] + s[0, :3])) < 1e-6  # x, p, jx flip
        assert np.max(np.abs(odd[:, 4] - s[0, 4])) < 1e-6    # jz unchanged

    def test_constant_markovian_dtc_and_tiss(self):
        dtc_cfg = make_config(
            schedule=od.DissipationSchedule(kappa0=0.05),
            periods_total=4000, periods_recorded=200,
            steps_per_period=1024, record_dense=True,
        )
        traj, strobe = od.simulate(dtc_cfg)
        assert od.detect_period(strobe) == 2
        tiss_cfg = make_config(
            schedule=od.DissipationSchedule(kappa0=2.7),
            periods_total=300, periods_recorded=200,
            steps_per_period=1024,
        )
        traj, strobe = od.simulate(tiss_cfg)
        assert od.detect_period(strobe) == 1
        assert od.intra_period_variance(traj, 30) < 1e-3

    def test_spin_norm_drift_small(self):
        config = make_config(
            schedule=od.DissipationSchedule(kappa0=2.7, m=0.675, kappa_max=5.0),
            periods_total=300, periods_recorded=10, steps_per_period=4096,
        )
        traj, _ = od.simulate(config)
        assert traj.manifest["max_spin_norm_drift"] < 1e-8

    def test_step_halving_convergence_order(self):
        finals = {}
        for spp in (256, 512, 1024):
            config = make_config(periods_total=10, periods_recorded=0,
                                 steps_per_period=spp, record_dense=False)
            _, strobe = od.simulate(config)
            finals[spp] = strobe.states[-1]
        e1 = np.max(np.abs(finals[256] - finals[512]))
        e2 = np.max(np.abs(finals[512] - finals[1024]))
        order = math.log2(e1 / e2)
        assert order >= 3.5

    def test_norm_drift_abort(self):
        config = make_config(periods_total=50, steps_per_period=4,
                             periods_recorded=0, record_dense=False,
                             norm_drift_tol=1e-6)
        with pytest.raises(od.SpinNormDriftError):
            od.simulate(config)

    def test_nonfinite_abort(self):
        config = make_config(
            initial=od.MeanFieldState(1e150, 0.0, 0.0, 0.0, -1.0),
            periods_total=1, periods_recorded=0, steps_per_period=64,
            record_dense=False, norm_drift_tol=1e290,
        )
        with pytest.raises(od.NonFiniteStateError):
            od.simulate(config)

    def test_validation(self):
        with pytest.raises(ValueError):  # odd step count straddles the switch
            make_config(steps_per_period=255)
        with pytest.raises(ValueError):
            make_config(periods_recorded=30, periods_total=20)
        with pytest.raises(ValueError):
            make_config(initial=3)
        with pytest.raises(ValueError):  # resample interval off the step grid
            make_config(noise=od.NoiseSettings(a0=0.1, seed=0, resample_interval=0.013))

    def test_noise_stride_lookup_matches_process(self):
        h = od.DriveProtocol(1.0, 1.0, 0.02).period / 256
        config = make_config(
            schedule=od.DissipationSchedule(kappa0=2.7, m=0.675, kappa_max=5.0),
            noise=od.NoiseSettings(a0=0.5, seed=21, resample_interval=4 * h),
            periods_total=4, periods_recorded=4,
        )
        assert config.noise_stride() == 4
        traj, _ = od.simulate(config)
        process = od.NoiseProcess(config.noise, resample_interval=config.step_size)
        draws = process.prefix(4 * 256 // 4 + 1)
        from opendicke.model import kappa_scalar

        rate_args = config.schedule.rate_args()
        for i in (0, 1, 7, 350, len(traj) - 1):
            n = i  # recording starts at period 0 here
            expected = kappa_scalar(traj.t[i], *rate_args) + 0.5 * draws[n // 4]
            assert traj.kappa[i] == pytest.approx(expected, rel=1e-14)

    def test_subcritical_warns(self):
        config = make_config(drive=od.DriveProtocol(0.3, 1.0, 0.0),
                             initial=od.MeanFieldState(0.1, 0.0, 0.0, 0.0, -1.0),
                             periods_total=3, periods_recorded=0, record_dense=False)
        with pytest.warns(UserWarning, match="lambda0"):
            od.simulate(config)


class TestRelaxation:
    FREQS = od.ModelFrequencies(1.0, 1.0)

    def test_fixed_point_stays_put(self):
        ss = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=1)
        relaxed = od.relax_to_steady_state(ss, 1.0, self.FREQS, 0.05)
        assert np.max(np.abs(relaxed.as_array() - ss.as_array())) < 1e-10

    def test_perturbation_relaxes_back(self):
        ss = od.steady_state_closed_form(1.0, self.FREQS, 0.05, branch=1)
        arr = ss.as_array()
        arr[0] += 0.01
        arr[1] -= 0.005
        # tilt the spin without leaving the unit sphere
        j = arr[2:]
        j += np.array([0.01, 0.02, 0.015])
        j /= np.linalg.norm(j)
        relaxed = od.relax_to_steady_state(od.MeanFieldState.from_array(arr), 1.0, self.FREQS, 0.05)
        assert np.max(np.abs(relaxed.as_array() - ss.as_array())) < 1e-6

    def test_subcritical_goes_to_normal_phase(self):
        start = od.MeanFieldState(0.05, 0.0, 0.1, 0.0, -math.sqrt(1 - 0.01))
        relaxed = od.relax_to_steady_state(start, 0.3, self.FREQS, 0.05)
        assert np.max(np.abs(relaxed.as_array() - np.array([0, 0, 0, 0, -1.0]))) < 1e-6

    def test_oscillatory_dynamics_raise(self):
        # no dissipation, tilted spin: pure precession never settles
        start = od.MeanFieldState(0.0, 0.0, 0.5, 0.0, -math.sqrt(0.75))
        with pytest.raises(od.RelaxationError):
            od.relax_to_steady_state(start, 0.0, self.FREQS, 0.0, max_time=2000.0)
