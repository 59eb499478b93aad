"""Reflecting-element hardware model tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irswet.hardware import (CouplingParams, PhaseConfig, amplitude_of_phase,
                             reflection_coefficients, wrap_phase)


@settings(max_examples=100, deadline=None)
@given(theta=st.floats(-50.0, 50.0))
def test_wrap_phase_range_and_periodicity(theta):
    w = wrap_phase(theta)
    assert -np.pi <= w < np.pi
    assert abs(wrap_phase(theta + 2 * np.pi) - w) < 1e-9


def test_wrap_phase_endpoints():
    assert wrap_phase(np.pi) == pytest.approx(-np.pi)
    assert wrap_phase(-np.pi) == pytest.approx(-np.pi)
    assert wrap_phase(0.0) == 0.0


def test_coupling_exact_endpoints():
    params = CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
    assert amplitude_of_phase(params.eta + np.pi / 2, params) == pytest.approx(1.0, abs=1e-15)
    assert amplitude_of_phase(params.eta - np.pi / 2, params) == pytest.approx(0.2, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(beta_min=st.floats(0.0, 1.0), alpha=st.floats(0.1, 8.0),
       eta=st.floats(-np.pi, np.pi), theta=st.floats(-np.pi, np.pi))
def test_coupling_amplitude_bounds(beta_min, alpha, eta, theta):
    params = CouplingParams(beta_min=beta_min, eta=eta, alpha=alpha)
    amp = amplitude_of_phase(theta, params)
    assert beta_min - 1e-12 <= amp <= 1.0 + 1e-12


def test_coupling_param_validation():
    with pytest.raises(ValueError):
        CouplingParams(beta_min=-0.1, eta=0.0, alpha=1.0)
    with pytest.raises(ValueError):
        CouplingParams(beta_min=1.2, eta=0.0, alpha=1.0)
    with pytest.raises(ValueError):
        CouplingParams(beta_min=0.5, eta=0.0, alpha=0.0)
    with pytest.raises(ValueError):
        CouplingParams(beta_min=0.5, eta=np.inf, alpha=1.0)


def test_phase_config_wraps_on_entry():
    cfg = PhaseConfig(thetas=np.array([3 * np.pi, -3 * np.pi, 0.5]))
    assert np.all(cfg.thetas >= -np.pi)
    assert np.all(cfg.thetas < np.pi)
    assert cfg.thetas[2] == pytest.approx(0.5)
    assert cfg.n == 3


def test_phase_config_rejects_bad_input():
    with pytest.raises(ValueError):
        PhaseConfig(thetas=np.array([[1.0, 2.0]]))
    with pytest.raises(ValueError):
        PhaseConfig(thetas=np.array([]))
    with pytest.raises(ValueError):
        PhaseConfig(thetas=np.array([np.nan]))


def test_reflection_coefficients_ideal_and_coupled():
    thetas = np.array([0.3, -1.2, 2.0])
    ideal = reflection_coefficients(PhaseConfig(thetas=thetas))
    np.testing.assert_allclose(ideal, np.exp(1j * thetas), atol=1e-12)

    params = CouplingParams(beta_min=0.2, eta=0.43 * np.pi, alpha=1.6)
    coupled = reflection_coefficients(PhaseConfig(thetas=thetas, coupling=params))
    expected = amplitude_of_phase(thetas, params) * np.exp(1j * thetas)
    np.testing.assert_allclose(coupled, expected, atol=1e-12)
    assert np.all(np.abs(coupled) <= 1.0 + 1e-12)
