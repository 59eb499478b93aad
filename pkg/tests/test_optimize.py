"""Phase-selection scheme tests: direct, search, moments, scheme boundary."""

import numpy as np
import pytest

from irswet.geometry import er_los_phases
from irswet.hardware import CouplingParams, amplitude_of_phase, wrap_phase
from irswet.optimize import (AOConfig, OptimResult, PhasorEnergy,
                             energy_variance, expected_energy, fit_tau,
                             kappa_boundary, om_solve, phasor_energy,
                             dm_solve, select_scheme)

PARAMS = CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
QUICK = AOConfig(restarts=1, max_sweeps=40)


def test_dm_places_all_elements_at_peak_amplitude():
    res = dm_solve(PARAMS, 16)
    expected = wrap_phase(PARAMS.eta + np.pi / 2)
    np.testing.assert_allclose(res.thetas, expected, atol=1e-12)
    np.testing.assert_allclose(res.amplitudes, 1.0, atol=1e-12)
    assert res.amp_sq_sum == pytest.approx(16.0)
    assert np.isnan(res.energy)


def test_dm_with_phase_front_reports_energy():
    los = er_los_phases(9, 3, 0.4)
    inc = np.zeros(9)
    res = dm_solve(PARAMS, 9, los_phases=los, incident_phases=inc)
    ref = phasor_energy(res.thetas, res.amplitudes, los, inc)
    assert res.energy == pytest.approx(ref.energy, rel=1e-12)


def test_phasor_energy_matches_naive_sum():
    rng = np.random.default_rng(1)
    thetas = rng.uniform(-np.pi, np.pi, 20)
    amps = rng.uniform(0.2, 1.0, 20)
    los = rng.uniform(-np.pi, np.pi, 20)
    inc = rng.uniform(-np.pi, np.pi, 20)
    ref = abs(np.sum(amps * np.exp(1j * (thetas + los + inc)))) ** 2
    pe = phasor_energy(thetas, amps, los, inc)
    assert pe.energy == pytest.approx(ref, rel=1e-12)
    assert pe.amp_sq_sum == pytest.approx(float(np.sum(amps**2)), rel=1e-12)


def test_phasor_energy_shape_check():
    with pytest.raises(ValueError):
        phasor_energy(np.zeros(3), np.ones(3), np.zeros(3), np.zeros(4))


def test_ideal_surface_alignment_reaches_n_squared():
    n = 49
    los = er_los_phases(n, 7, 0.5)
    inc = np.linspace(-2, 2, n)
    ideal = CouplingParams(beta_min=1.0, eta=0.0, alpha=1.0)
    thetas = wrap_phase(-(los + inc))
    pe = phasor_energy(thetas, np.ones(n), los, inc)
    assert pe.energy == pytest.approx(n**2, rel=1e-12)


def test_om_trace_monotone_and_beats_alignment():
    n = 36
    los = er_los_phases(n, 6, np.pi / 6)
    inc = np.zeros(n)
    res = om_solve(PARAMS, los, inc, cfg=QUICK, seed=0)
    assert np.all(np.diff(res.objective_trace) >= 0)
    # under coupling the naive full alignment pays the amplitude price
    aligned = wrap_phase(-(los + inc))
    naive = phasor_energy(aligned, amplitude_of_phase(aligned, PARAMS), los, inc)
    assert res.energy >= naive.energy
    assert res.energy <= n**2 + 1e-9


def test_om_reproducible_across_calls():
    n = 16
    los = er_los_phases(n, 4, 0.3)
    inc = np.zeros(n)
    a = om_solve(PARAMS, los, inc, cfg=QUICK, seed=5)
    b = om_solve(PARAMS, los, inc, cfg=QUICK, seed=5)
    np.testing.assert_array_equal(a.thetas, b.thetas)


def test_om_threads_match_serial():
    n = 25
    los = er_los_phases(n, 5, 0.2)
    inc = np.zeros(n)
    serial = om_solve(PARAMS, los, inc, cfg=QUICK, seed=3, threads=1)
    parallel = om_solve(PARAMS, los, inc, cfg=QUICK, seed=3, threads=4)
    assert parallel.energy == pytest.approx(serial.energy, rel=1e-12)


def test_om_input_validation():
    with pytest.raises(ValueError):
        om_solve(PARAMS, np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        om_solve(PARAMS, np.zeros(0), np.zeros(0))


def test_moment_helpers_closed_form():
    pe, kap, b2, e = 4.0, 2.0, 80.0, 3600.0
    scale = pe * b2 / (2 * (1 + kap))
    assert expected_energy(pe, kap, b2, e) == pytest.approx(scale * (2 + 2 * kap * e / b2))
    assert energy_variance(pe, kap, b2, e) == pytest.approx(scale**2 * (4 + 8 * kap * e / b2))


def test_moment_helpers_kappa_zero():
    # pure scatter: mean = P * amp_sq_sum, variance = mean^2
    assert expected_energy(3.0, 0.0, 50.0, 1234.0) == pytest.approx(150.0)
    assert energy_variance(3.0, 0.0, 50.0, 1234.0) == pytest.approx(150.0**2)


def test_moment_helpers_validation():
    with pytest.raises(ValueError):
        expected_energy(-1.0, 2.0, 10.0, 100.0)
    with pytest.raises(ValueError):
        energy_variance(1.0, -0.5, 10.0, 100.0)
    with pytest.raises(ValueError):
        expected_energy(1.0, 2.0, 0.0, 100.0)
    with pytest.raises(ValueError):
        expected_energy(1.0, 2.0, 10.0, -1.0)


def test_kappa_boundary_balances_schemes():
    n, b2, e = 100, 80.0, 3675.0
    kb = kappa_boundary(n, b2, e)
    # at the boundary the two schemes' expected energies coincide
    dm_mean = expected_energy(1.0, kb, float(n), float(n))
    om_mean = expected_energy(1.0, kb, b2, e)
    assert dm_mean == pytest.approx(om_mean, rel=1e-12)


def test_kappa_boundary_infinite_when_search_gains_nothing():
    assert kappa_boundary(100, 80.0, 99.0) == float("inf")
    assert kappa_boundary(100, 80.0, 100.0) == float("inf")


def test_kappa_boundary_validation():
    with pytest.raises(ValueError):
        kappa_boundary(0, 1.0, 10.0)
    with pytest.raises(ValueError):
        kappa_boundary(10, 0.0, 10.0)
    with pytest.raises(ValueError):
        kappa_boundary(10, 11.0, 10.0)
    with pytest.raises(ValueError):
        kappa_boundary(10, 5.0, -1.0)


def test_select_scheme():
    assert select_scheme(1.0, 2.0) == "dm"
    assert select_scheme(2.0, 2.0) == "dm"
    assert select_scheme(3.0, 2.0) == "om"
    assert select_scheme(5.0, float("inf")) == "dm"
    with pytest.raises(ValueError):
        select_scheme(-1.0, 2.0)


def test_fit_tau_exact_on_synthetic_quadratic():
    pts = [(n, 0.7851 * n**2) for n in (16, 64, 144, 400)]
    assert fit_tau(pts) == pytest.approx(0.7851, rel=1e-12)


def test_fit_tau_validation():
    with pytest.raises(ValueError):
        fit_tau([])
    with pytest.raises(ValueError):
        fit_tau([(0, 1.0)])


def test_aoconfig_validation():
    with pytest.raises(ValueError):
        AOConfig(grid_points=4)
    with pytest.raises(ValueError):
        AOConfig(refine_tol=0.0)
    with pytest.raises(ValueError):
        AOConfig(max_sweeps=0)
    with pytest.raises(ValueError):
        AOConfig(restarts=-1)


def test_optimresult_rejects_decreasing_trace():
    pe = PhasorEnergy(energy=1.0, cos_sum=1.0, sin_sum=0.0, amp_sq_sum=1.0)
    with pytest.raises(ValueError):
        OptimResult(thetas=np.zeros(1), amplitudes=np.ones(1), energy_parts=pe,
                    sweeps_used=1, objective_trace=np.array([2.0, 1.0]))
