import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as hst

import sta_transport as st

TRAP = st.TrapParams.reference()
MODELS = [st.gaussian(TRAP), st.truncated_harmonic(TRAP)]


@pytest.mark.parametrize("model", MODELS, ids=["gaussian", "harmonic"])
def test_force_is_negative_potential_gradient(model):
    # central difference, O(h^2); sample points clear of the harmonic clamp edge
    rng = np.random.default_rng(7)
    xi = rng.uniform(-0.6, 0.6, size=100) * TRAP.width
    h = 1e-12
    num = -(model.potential(xi + h) - model.potential(xi - h)) / (2 * h)
    ana = model.force(xi)
    scale = np.abs(ana).max()
    assert np.abs(num - ana).max() < 1e-4 * scale


@pytest.mark.parametrize("model", MODELS, ids=["gaussian", "harmonic"])
def test_potential_is_even(model):
    xi = np.linspace(0.0, 2.0, 41) * TRAP.width
    np.testing.assert_allclose(model.potential(xi), model.potential(-xi), rtol=0, atol=1e-40)


@pytest.mark.parametrize("model", MODELS, ids=["gaussian", "harmonic"])
def test_potential_depth_at_center(model):
    assert model.potential(0.0) == pytest.approx(-TRAP.depth, rel=1e-14)


def test_harmonic_clamps_to_zero_outside_width():
    h = st.truncated_harmonic(TRAP)
    xi = np.array([1.0, 1.5, 3.0]) * TRAP.width
    assert np.all(h.potential(xi) == 0.0)
    assert np.all(h.force(xi) == 0.0)
    assert np.all(h.force(-xi) == 0.0)


def test_gaussian_vanishes_far_away():
    g = st.gaussian(TRAP)
    assert abs(g.potential(20 * TRAP.waist)) < 1e-30 * TRAP.depth


def test_gaussian_curvature_matches_design_frequency():
    # quadratic Taylor term: U''(0)/m = 4 U0 / (m w^2), and w = sqrt(2) d makes
    # that equal the curvature frequency of the harmonic well exactly
    g = st.gaussian(TRAP)
    m = TRAP.constants.atom_mass

    def second_diff(h):
        return (g.potential(h) - 2 * g.potential(0.0) + g.potential(-h)) / h**2

    h = TRAP.width * 1e-3
    curv = (4 * second_diff(h / 2) - second_diff(h)) / 3  # Richardson, kills O(h^2)
    omega_g = np.sqrt(curv / m)
    assert omega_g == pytest.approx(TRAP.curvature_frequency, rel=1e-6)
    assert TRAP.waist == pytest.approx(np.sqrt(2) * TRAP.width, rel=1e-14)


def test_curvature_frequency_value():
    # sqrt(2 U0 / m) / d for the reference well
    assert TRAP.curvature_frequency / (2 * np.pi) == pytest.approx(85.2986e3, rel=1e-4)


def test_escape_radii():
    assert st.gaussian(TRAP).escape_radius() == TRAP.waist
    assert st.truncated_harmonic(TRAP).escape_radius() == TRAP.width


def test_acceleration_is_planar_force_over_mass():
    g = st.gaussian(TRAP)
    xi = np.linspace(-1.0, 1.0, 11) * TRAP.width
    disp = np.stack([xi, np.zeros_like(xi)], axis=-1)
    acc = g.acceleration(disp)
    np.testing.assert_allclose(acc[:, 0], g.force(xi) / TRAP.constants.atom_mass, atol=1e-9)
    np.testing.assert_allclose(acc[:, 1], 0.0, atol=1e-30)


def test_params_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        TRAP.depth = 1.0


def test_params_reject_nonpositive():
    with pytest.raises(ValueError):
        st.TrapParams(depth=0.0, width=0.73e-6)
    with pytest.raises(ValueError):
        st.TrapParams(depth=TRAP.depth, width=-1e-6)


def test_quoted_frequency_consistency_window():
    # a quoted trap frequency within 15% of the curvature value is accepted,
    # anything further off is rejected
    ok = st.TrapParams(depth=TRAP.depth, width=TRAP.width, omega0=2 * np.pi * 90e3)
    assert ok.omega0 == pytest.approx(2 * np.pi * 90e3)
    with pytest.raises(ValueError):
        st.TrapParams(depth=TRAP.depth, width=TRAP.width, omega0=2 * np.pi * 120e3)


def test_waist_must_exceed_width():
    with pytest.raises(ValueError):
        st.TrapParams(depth=TRAP.depth, width=TRAP.width, waist=0.5 * TRAP.width)


@given(scale=hst.floats(min_value=0.05, max_value=3.0))
def test_gaussian_force_restores_toward_center(scale):
    g = st.gaussian(TRAP)
    xi = scale * TRAP.width
    assert g.force(xi) < 0 < g.force(-xi)
