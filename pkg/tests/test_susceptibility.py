"""Spectral response: closed form, dispersion, window metrics, sweeps."""

import numpy as np
import pytest

from exciton_eit import (CONST, EvaluationError, FieldDrive, LadderSystem,
                         chi, chi_derivative, compute_spectrum, dressed_peaks,
                         group_index, group_index_fd, group_velocity,
                         locate_absorption_peaks, sweep_control,
                         window_metrics)
from exciton_eit.susceptibility import SpectrumTable


def default_system(N=6.2422e25, gamma_bc=7.596e9):
    return LadderSystem.from_frequencies(
        omega_ab=3.266576e15, omega_ac=3.1402e13,
        gamma_ab=4.5573e10, gamma_bc=gamma_bc,
        N=N, dipole_ab_sq=0.334e-60)


def drive_for(system, Omega2=2.5e10, Omega1=1e6, delta1=0.0, delta2=0.0):
    return FieldDrive.from_detunings(system, Omega1=Omega1, Omega2=Omega2,
                                     delta1=delta1, delta2=delta2)


def random_parameters(rng):
    gamma_ab = rng.uniform(1e9, 1e11)
    sys_ = LadderSystem.from_frequencies(
        omega_ab=rng.uniform(1e15, 5e15),
        omega_ac=rng.uniform(1e13, 5e13),
        gamma_ab=gamma_ab,
        gamma_bc=rng.uniform(1e8, 1e10),
        N=rng.uniform(1e24, 1e26),
        dipole_ab_sq=rng.uniform(0.05, 2.0) * 1e-60)
    drv = drive_for(sys_,
                    Omega2=rng.uniform(0.0, 2e11),
                    Omega1=rng.uniform(1e4, 1e7),
                    delta1=rng.uniform(-1e11, 1e11),
                    delta2=rng.uniform(-1e11, 1e11))
    return sys_, drv


class TestChi:
    def test_control_off_peak_is_lorentzian_maximum(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=0.0)
        val = chi(drv.delta1, sys_, drv)
        expected = 1j * sys_.chi_prefactor / sys_.gamma_ab
        assert val == pytest.approx(expected, rel=1e-14)

    def test_perfect_transparency_without_ground_dephasing(self):
        sys_ = default_system(gamma_bc=0.0)
        drv = drive_for(sys_, Omega2=2.5e10)
        assert chi(drv.delta1, sys_, drv) == 0.0

    def test_matches_linear_steady_state_on_random_draws(self):
        # chi(w) * (hbar eps0 Omega1 / N |d|^2) must equal the closed-form
        # steady-state coherence with the probe detuning shifted by w
        from exciton_eit import steady_state_linearized
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            sys_, drv = random_parameters(rng)
            w = rng.uniform(-3e11, 3e11)
            shifted = FieldDrive.from_detunings(
                sys_, Omega1=drv.Omega1, Omega2=drv.Omega2,
                delta1=drv.delta1 - w, delta2=drv.delta2)
            sigma_ab, _ = steady_state_linearized(shifted, sys_)
            oracle = sys_.chi_prefactor * sigma_ab / shifted.Omega1
            val = chi(w, sys_, drv)
            assert abs(val - oracle) <= 1e-12 * abs(oracle)

    def test_pole_raises_instead_of_inf(self):
        sys_ = LadderSystem.from_frequencies(
            omega_ab=3.266576e15, omega_ac=3.1402e13,
            gamma_ab=0.0, gamma_bc=0.0, N=6.2422e25, dipole_ab_sq=0.334e-60)
        drv = drive_for(sys_, Omega2=0.0)
        with pytest.raises(EvaluationError):
            chi(drv.delta1, sys_, drv)

    def test_vectorized_matches_scalar(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        grid = np.linspace(-1e11, 1e11, 7)
        vec = chi(grid, sys_, drv)
        for w, v in zip(grid, vec):
            assert chi(float(w), sys_, drv) == v

    def test_passivity_random_draws(self):
        rng = np.random.default_rng(7)
        grid = np.linspace(-5e11, 5e11, 101)
        for _ in range(300):
            sys_, drv = random_parameters(rng)
            assert np.all(chi(grid, sys_, drv).imag > 0.0)

    def test_even_absorption_at_zero_detunings(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=5e10)
        grid = np.linspace(1e8, 3e11, 50)
        np.testing.assert_allclose(chi(grid, sys_, drv).imag,
                                   chi(-grid, sys_, drv).imag, rtol=1e-12)


class TestGroupIndex:
    def test_vacuum_is_unity(self):
        sys_ = default_system(N=0.0)
        drv = drive_for(sys_)
        grid = np.linspace(-1e11, 1e11, 11)
        np.testing.assert_allclose(group_index(grid, sys_, drv), 1.0)
        assert group_velocity(0.0, sys_, drv) == pytest.approx(CONST.c)

    def test_window_center_magnitude(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=2.5e10)
        ng = group_index(0.0, sys_, drv)
        assert 3e3 < ng < 3e5

    def test_analytic_matches_finite_difference(self):
        sys_ = default_system()
        for om2 in (0.0, 1e10, 2.5e10, 8e10):
            drv = drive_for(sys_, Omega2=om2)
            grid = np.linspace(-2e11, 2e11, 41)
            a = group_index(grid, sys_, drv)
            f = group_index_fd(grid, sys_, drv)
            np.testing.assert_allclose(a, f, rtol=1e-4)

    def test_group_velocity_consistent_with_index(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=2.5e10)
        # at the window center Re chi = 0, so v_g = c / n_g exactly
        vg = group_velocity(0.0, sys_, drv)
        ng = group_index(0.0, sys_, drv)
        assert vg == pytest.approx(CONST.c / ng, rel=1e-2)

    def test_limit_path_when_ground_dephasing_vanishes(self):
        sys_ = default_system(gamma_bc=0.0)
        drv = drive_for(sys_, Omega2=2.5e10)
        expected = 1.0 + 0.5 * drv.omega1 * sys_.chi_prefactor / abs(drv.Omega2) ** 2
        assert group_index(0.0, sys_, drv) == pytest.approx(expected, rel=1e-12)


class TestWindowMetrics:
    def test_control_off(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=0.0)
        m = window_metrics(sys_, drv)
        assert m.width == 0.0
        assert m.center_abs == pytest.approx(sys_.chi_prefactor / sys_.gamma_ab, rel=1e-12)

    def test_width_monotone_in_control(self):
        sys_ = default_system()
        widths = []
        for om2 in np.linspace(5e9, 1e11, 20):
            widths.append(window_metrics(sys_, drive_for(sys_, Omega2=om2)).width)
        diffs = np.diff(widths)
        assert np.all(diffs >= 0.0)
        opened = [w for w in widths if w > 0]
        assert len(opened) >= 10
        assert all(b > a for a, b in zip(opened, opened[1:]))

    def test_center_absorption_positive_with_dephasing(self):
        sys_ = default_system()
        m = window_metrics(sys_, drive_for(sys_, Omega2=2.5e10))
        assert m.center_abs > 0.0

    def test_lorentzian_fwhm(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=0.0)
        # the absorption half-maximum points of the bare line sit at
        # +-gamma_ab, so the reported width equals the FWHM 2 gamma_ab
        m = window_metrics(sys_, drv)
        assert m.width == 0.0  # no window without control

    def test_width_scaling_quadratic_in_the_open_window_regime(self):
        sys_ = default_system()
        grid = np.geomspace(2e10, 5e10, 8)
        widths = np.array([window_metrics(sys_, drive_for(sys_, Omega2=v)).width
                           for v in grid])
        slope = np.polyfit(np.log(grid), np.log(widths), 1)[0]
        assert 1.7 <= slope <= 2.3

    def test_width_capped_when_absorption_never_recovers(self):
        # ground dephasing above the optical dephasing kills the contrast:
        # the doublet peaks stay below half of the bare peak, so the
        # reported width saturates at the scan span
        sys_ = LadderSystem.from_frequencies(
            omega_ab=3.266576e15, omega_ac=3.1402e13,
            gamma_ab=1e10, gamma_bc=5e10,
            N=6.2422e25, dipole_ab_sq=0.334e-60)
        drv = drive_for(sys_, Omega2=3e11)
        m = window_metrics(sys_, drv)
        span = max(10 * sys_.gamma_ab, 4 * abs(drv.Omega2))
        assert m.width == pytest.approx(2 * span)


class TestDressedPeaks:
    def test_requires_control_resonance(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=5e10, delta2=1e9)
        with pytest.raises(ValueError):
            dressed_peaks(sys_, drv)

    def test_prediction_and_location(self):
        sys_ = default_system()
        om2 = 5e10
        drv = drive_for(sys_, Omega2=om2)
        lo, hi = dressed_peaks(sys_, drv)
        assert (lo, hi) == (-om2, om2)
        found = locate_absorption_peaks(sys_, drv)
        assert len(found) == 2
        bound = sys_.gamma_ab**2 / om2
        assert abs(found[0] - lo) < bound
        assert abs(found[1] - hi) < bound

    def test_peaks_merge_for_weak_control(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=1e8)
        found = locate_absorption_peaks(sys_, drv)
        assert all(abs(p) < 0.2 * sys_.gamma_ab for p in found)

    def test_symmetric_about_two_photon_resonance(self):
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=5e10)
        found = locate_absorption_peaks(sys_, drv)
        assert found[0] == pytest.approx(-found[1], rel=1e-3)


class TestSweep:
    def test_argmax_near_analytic_optimum(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        grid = np.linspace(1e9, 1e11, 199)
        sweep = sweep_control(sys_, drv, grid)
        analytic = np.sqrt(sys_.gamma_bc * (sys_.gamma_ab + 2 * sys_.gamma_bc))
        assert abs(sweep.argmax_omega2 - analytic) <= grid[1] - grid[0]

    def test_threads_do_not_change_results(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        grid = np.linspace(1e9, 1e11, 57)
        one = sweep_control(sys_, drv, grid, threads=1)
        four = sweep_control(sys_, drv, grid, threads=4)
        np.testing.assert_array_equal(one.ng_center, four.ng_center)
        np.testing.assert_array_equal(one.chi_im_center, four.chi_im_center)

    def test_absorption_decreases_beyond_optimum(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        grid = np.linspace(2.2e10, 3e11, 60)
        sweep = sweep_control(sys_, drv, grid)
        assert np.all(np.diff(sweep.chi_im_center) < 0.0)

    def test_group_index_flattens_at_strong_control(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        values = [sweep_control(sys_, drv, np.array([v]), threads=1).ng_max
                  for v in (1e12, 1e13, 1e14)]
        assert values[0] > values[1] > values[2]
        assert values[2] - 1.0 < 1e-2

    def test_rejects_bad_grids(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        with pytest.raises(ValueError):
            sweep_control(sys_, drv, np.array([]))
        with pytest.raises(ValueError):
            sweep_control(sys_, drv, np.array([3e10, 2e10, 1e10]))

    def test_single_point_grid(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        sweep = sweep_control(sys_, drv, np.array([2.5e10]))
        assert sweep.argmax_omega2 == 2.5e10
        assert len(sweep.ng_center) == 1


class TestScalingInvariance:
    def test_prefactor_scaling(self):
        rng = np.random.default_rng(5)
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=5e10)
        scale = float(rng.uniform(0.1, 10.0))
        sys_scaled = default_system(N=sys_.N * scale)
        # absorption extrema do not move under prefactor scaling
        p1 = locate_absorption_peaks(sys_, drv)
        p2 = locate_absorption_peaks(sys_scaled, drive_for(sys_scaled, Omega2=5e10))
        np.testing.assert_allclose(p1, p2, rtol=1e-9)
        # n_g - 1 scales linearly with the prefactor
        ng1 = group_index(0.0, sys_, drv) - 1.0
        ng2 = group_index(0.0, sys_scaled, drive_for(sys_scaled, Omega2=5e10)) - 1.0
        assert ng2 == pytest.approx(scale * ng1, rel=1e-12)

    def test_sweep_argmax_invariant_under_prefactor(self):
        sys_ = default_system()
        sys_big = default_system(N=sys_.N * 7.5)
        grid = np.linspace(1e9, 1e11, 120)
        a = sweep_control(sys_, drive_for(sys_), grid)
        b = sweep_control(sys_big, drive_for(sys_big), grid)
        assert a.argmax_omega2 == b.argmax_omega2


class TestKramersKronig:
    def test_hilbert_transform_reproduces_dispersion(self):
        # chi is a rational response, analytic in the upper half plane, so
        # chi'(w0) = (1/pi) PV int chi''(w) / (w - w0) dw; evaluate the PV
        # sum at grid midpoints against the analytic real part
        sys_ = default_system()
        drv = drive_for(sys_, Omega2=2.5e10)
        span = 1.2e13
        n = 24001
        w = np.linspace(-span, span, n)
        im = chi(w, sys_, drv).imag
        dw = w[1] - w[0]
        targets = np.linspace(-1e11, 1e11, 201) + 0.5 * dw
        kk = (dw / np.pi) * np.sum(im[None, :] / (w[None, :] - targets[:, None]), axis=1)
        re = chi(targets, sys_, drv).real
        scale = np.max(np.abs(re))
        assert np.max(np.abs(kk - re)) / scale < 0.02


class TestSpectrumTable:
    def test_arrays_validated(self):
        with pytest.raises(ValueError):
            SpectrumTable(omega_grid=np.array([0.0, 1.0]),
                          chi_re=np.zeros(3), chi_im=np.zeros(2), n_g=np.zeros(2))
        with pytest.raises(ValueError):
            SpectrumTable(omega_grid=np.array([1.0, 0.0]),
                          chi_re=np.zeros(2), chi_im=np.zeros(2), n_g=np.zeros(2))

    def test_compute_spectrum_shapes_and_passivity(self):
        sys_ = default_system()
        drv = drive_for(sys_)
        grid = np.linspace(-2e11, 2e11, 201)
        table = compute_spectrum(sys_, drv, grid)
        assert len(table.chi_re) == len(grid)
        assert np.all(table.chi_im >= -1e-12 * np.max(np.abs(table.chi_im)))
        assert table.metadata["N_m3"] == sys_.N
