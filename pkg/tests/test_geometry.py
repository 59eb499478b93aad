"""Array geometry and line-of-sight channel construction tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irswet.geometry import (AngleSet, ArrayGeometry, element_exponents,
                             er_los_phase, er_los_phases, pb_irs_channel,
                             rician_entries, sample_er_channel, steering_ula,
                             steering_upa)


def test_element_exponents_small_grid():
    x_exp, y_exp = element_exponents(2, 3)
    np.testing.assert_array_equal(x_exp, [0, 0, 0, 1, 1, 1])
    np.testing.assert_array_equal(y_exp, [0, 1, 2, 0, 1, 2])


def test_element_exponents_worked_example():
    # element 3 of a ny=10 grid sits at y offset 2; toward a receiver at
    # 30 degrees with half-wavelength spacing its phase is exactly -pi
    phase = er_los_phase(3, ny=10, er_angle=np.pi / 6)
    assert phase == pytest.approx(-np.pi, abs=1e-12)


def test_er_los_phase_matches_vector_form():
    n, ny, ang = 12, 4, 0.7
    vec = er_los_phases(n, ny, ang)
    single = [er_los_phase(j, ny, ang) for j in range(1, n + 1)]
    np.testing.assert_allclose(vec, single, atol=1e-12)


def test_er_los_phase_bounds_checked():
    with pytest.raises(ValueError):
        er_los_phase(0, ny=4, er_angle=0.0)
    with pytest.raises(ValueError):
        er_los_phase(9, ny=4, er_angle=0.0, n_total=8)


def test_steering_ula_unit_norm():
    v = steering_ula(0.3, 7)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(np.abs(v) - 1 / np.sqrt(7)) < 1e-12)


@settings(max_examples=30, deadline=None)
@given(x_step=st.floats(-3.0, 3.0), y_step=st.floats(-3.0, 3.0),
       nx=st.integers(1, 5), ny=st.integers(1, 5))
def test_steering_upa_is_kron_of_lines(x_step, y_step, nx, ny):
    upa = steering_upa(x_step, y_step, nx, ny)
    kron = np.kron(steering_ula(x_step, nx), steering_ula(y_step, ny))
    np.testing.assert_allclose(upa, kron, atol=1e-12)
    assert np.linalg.norm(upa) == pytest.approx(1.0, abs=1e-12)


def test_pb_irs_channel_structure():
    geom = ArrayGeometry(m=4, nx=5, ny=5)
    angles = AngleSet(azimuth=np.pi / 4, elevation=np.pi / 3)
    chan = pb_irs_channel(geom, angles)
    assert chan.entries.shape == (25, 4)
    # every entry has unit magnitude and the matrix is rank one
    np.testing.assert_allclose(np.abs(chan.entries), 1.0, atol=1e-12)
    s = np.linalg.svd(chan.entries, compute_uv=False)
    assert s[0] == pytest.approx(np.sqrt(4 * 25), rel=1e-12)
    assert s[1] < 1e-10


def test_pb_irs_channel_spacing_mismatch():
    geom = ArrayGeometry(m=2, nx=2, ny=2, spacing_ratio=0.5)
    angles = AngleSet(azimuth=0.1, elevation=0.2, spacing_ratio=0.4)
    with pytest.raises(ValueError):
        pb_irs_channel(geom, angles)


def test_geometry_validation():
    with pytest.raises(ValueError):
        ArrayGeometry(m=0, nx=2, ny=2)
    with pytest.raises(ValueError):
        ArrayGeometry(m=1, nx=0, ny=2)
    with pytest.raises(ValueError):
        AngleSet(azimuth=np.nan, elevation=0.0)


def test_rician_entries_kappa_limits():
    phases = np.array([0.0, 0.5, -1.0])
    scatter = np.array([1 + 1j, -2j, 0.5])
    # pure line of sight at huge kappa
    big = rician_entries(1e12, phases, scatter)
    np.testing.assert_allclose(big, np.exp(1j * phases), atol=1e-5)
    # pure scatter at kappa = 0
    zero = rician_entries(0.0, phases, scatter)
    np.testing.assert_allclose(zero, scatter, atol=1e-12)


def test_rician_entries_broadcast_and_moments():
    rng = np.random.default_rng(0)
    phases = np.zeros(6)
    scatter = (rng.standard_normal((40000, 6)) + 1j * rng.standard_normal((40000, 6))) / np.sqrt(2)
    ent = rician_entries(2.0, phases, scatter)
    assert ent.shape == (40000, 6)
    # unit second moment regardless of kappa split
    assert abs(np.mean(np.abs(ent) ** 2) - 1.0) < 0.02


def test_sample_er_channel_reproducible():
    phases = np.linspace(-1, 1, 8)
    a = sample_er_channel(2.0, phases, np.random.default_rng(3))
    b = sample_er_channel(2.0, phases, np.random.default_rng(3))
    np.testing.assert_array_equal(a.entries, b.entries)
    assert a.kappa == 2.0
