import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hst

import sta_transport as st
from sta_transport import thermometry as th

TRAP = st.TrapParams.reference()
GRID = th.default_cutoff_grid(TRAP.depth)
KB = TRAP.constants.k_B

temperatures = hst.floats(min_value=5e-6, max_value=60e-6)
etas = hst.floats(min_value=0.0, max_value=20.0)


@given(temperatures, etas, etas)
def test_cdf_monotone_in_energy(temp, eta_a, eta_b):
    lo, hi = sorted((eta_a, eta_b))
    p_lo = th.mb_cdf(lo * KB * temp, temp)
    p_hi = th.mb_cdf(hi * KB * temp, temp)
    assert 0.0 <= p_lo <= p_hi <= 1.0


@given(temperatures, temperatures)
def test_cdf_decreasing_in_temperature(temp_a, temp_b):
    # hotter population has more atoms above any fixed cutoff
    lo, hi = sorted((temp_a, temp_b))
    cutoff = 3.0 * KB * lo
    assert th.mb_cdf(cutoff, hi) <= th.mb_cdf(cutoff, lo) + 1e-12


def test_cdf_limits():
    assert th.mb_cdf(0.0, 27e-6) == 0.0
    assert th.mb_cdf(100 * KB * 27e-6, 27e-6) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        th.mb_cdf(1e-27, -1e-6)


def test_equivalent_temperature_round_trip():
    assert th.equivalent_temperature(1.5 * KB * 27e-6) == pytest.approx(27e-6, rel=1e-12)


def test_sampled_energy_mean():
    # total energy of a 3D harmonic thermal state averages 3 k_B T
    e = th.sample_mb_energies(27e-6, 100000, seed=1)
    assert np.mean(e) == pytest.approx(3.0 * KB * 27e-6, rel=0.02)


def test_survival_strictly_below():
    curve = th.survival_curve([1.0, 2.0, 3.0], [0.5, 1.0, 2.5, 3.5])
    assert curve.counts.tolist() == [0, 0, 2, 3]
    # an atom exactly at the cutoff is lost
    assert curve.survival.tolist() == [0.0, 0.0, 2 / 3, 1.0]


def test_survival_permutation_invariant():
    rng = np.random.default_rng(7)
    e = rng.gamma(3.0, KB * 27e-6, 500)
    a = th.survival_curve(e, GRID)
    b = th.survival_curve(rng.permutation(e), GRID)
    assert np.array_equal(a.survival, b.survival)


def test_survival_unit_scaling():
    rng = np.random.default_rng(8)
    e = rng.gamma(3.0, KB * 27e-6, 500)
    a = th.survival_curve(e, GRID)
    b = th.survival_curve(e / TRAP.depth, GRID / TRAP.depth)
    assert np.array_equal(a.survival, b.survival)


def test_survival_plateau_counts_lost_atoms():
    e = th.sample_mb_energies(12e-6, 50, seed=2)
    curve = th.survival_curve(e, GRID, n_total=100)
    assert curve.n_total == 100
    assert float(curve.survival[-1]) == pytest.approx(0.5, abs=1e-12)


def test_survival_all_lost():
    # an ensemble with no recaptured atoms still yields a (zero) curve
    curve = th.survival_curve([], GRID, n_total=100)
    assert np.all(curve.survival == 0.0)
    with pytest.raises(ValueError):
        th.survival_curve([], GRID)
    with pytest.raises(th.FitFailure):
        th.fit_temperature(curve)


def test_fit_recovers_synthetic_temperature():
    e = th.sample_mb_energies(27e-6, 10000, seed=0)
    fit = th.fit_temperature(th.survival_curve(e, GRID))
    assert fit.temperature == pytest.approx(27e-6, rel=0.05)
    assert not fit.non_thermal
    assert fit.sup_residual < 0.02


def test_fit_recovery_across_seeds():
    errs = []
    for seed in range(25):
        e = th.sample_mb_energies(27e-6, 2000, seed=seed)
        fit = th.fit_temperature(th.survival_curve(e, GRID))
        errs.append(abs(fit.temperature - 27e-6) / 27e-6)
    assert max(errs) < 0.05
    assert np.mean(errs) < 0.025


def test_uniform_energies_flagged_non_thermal():
    rng = np.random.default_rng(3)
    e = rng.uniform(0.0, TRAP.depth, 4000)
    fit = th.fit_temperature(th.survival_curve(e, GRID))
    assert fit.non_thermal
    assert fit.sup_residual > th.NON_THERMAL_SUP_RESIDUAL


def test_piecewise_recovers_reference_exactly():
    ref = th.REFERENCE_PIECEWISE
    y = ref.evaluate(GRID / TRAP.depth)
    curve = th.SurvivalCurve(
        cutoffs=GRID,
        survival=y,
        counts=np.round(y * 1000).astype(int),
        n_total=1000,
    )
    fit, dist = th.piecewise_linear_compare(curve, TRAP.depth)
    assert dist < 1e-9
    assert fit.slope == pytest.approx(ref.slope, abs=1e-6)
    assert fit.intercept == pytest.approx(ref.intercept, abs=1e-6)
    assert fit.plateau == pytest.approx(ref.plateau, abs=1e-6)


def test_piecewise_breakpoints():
    ref = th.REFERENCE_PIECEWISE
    assert ref.evaluate(ref.onset - 0.01) == 0.0
    assert ref.evaluate(ref.knee + 0.01) == pytest.approx(ref.plateau)


def test_fit_preconditions():
    short = th.survival_curve([1.0, 2.0], [0.5, 1.5, 2.5])
    with pytest.raises(ValueError):
        th.fit_temperature(short)
    with pytest.raises(ValueError):
        th.piecewise_linear_compare(
            th.survival_curve([1.0], [0.5, 1.5, 2.5, 3.5, 4.5]), TRAP.depth
        )
    with pytest.raises(ValueError):
        th.sample_mb_energies(-1e-6, 10)


def test_default_grid_span():
    assert GRID[0] == 0.0
    assert GRID[-1] == pytest.approx(1.2 * TRAP.depth, rel=1e-12)
    assert len(GRID) == th.HALF_WIDTH_GRID_POINTS
