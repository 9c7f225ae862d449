"""Expected-loss accounting, bounds, and the approval threshold sweep."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from creditmix.errors import (InfeasibleBudgetError, InputError,
                              UndefinedMetricError)
from creditmix.risk import (ElReport, PortfolioSpec, approval_curve,
                            build_el_report, default_grid,
                            expected_loss_actual, expected_loss_model,
                            income_lower_bound, invert_loss_budget,
                            loss_upper_bound, relative_el_error,
                            sample_exposures, total_expected_loss)


# ---------------------------------------------------------------- exposures

def test_portfolio_spec_validation():
    with pytest.raises(InputError, match="exposure_mode"):
        PortfolioSpec(exposure_mode="lognormal")
    with pytest.raises(InputError, match="recovery"):
        PortfolioSpec(recovery_rate=1.5)
    with pytest.raises(InputError, match="positive"):
        PortfolioSpec(loan_amount=0.0)
    with pytest.raises(InputError, match="mean"):
        PortfolioSpec(exposure_mode="normal", exposure_mean=-5.0)


def test_fixed_exposures_scalar_and_vector():
    spec = PortfolioSpec(loan_amount=250.0)
    np.testing.assert_array_equal(spec.exposures(4), [250.0] * 4)
    vec = PortfolioSpec(loan_amount=np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(vec.exposures(3), [1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="entries"):
        vec.exposures(5)


def test_sampled_exposures_deterministic_and_positive():
    a = sample_exposures(1000, 1000.0, 100.0, seed=7)
    b = sample_exposures(1000, 1000.0, 100.0, seed=7)
    c = sample_exposures(1000, 1000.0, 100.0, seed=8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert (a > 0).all()
    assert a.mean() == pytest.approx(1000.0, abs=15.0)
    # tight positive-mean case exercises the redraw loop
    tight = sample_exposures(2000, 0.1, 5.0, seed=0)
    assert (tight > 0).all()


# ---------------------------------------------------------------- losses

def test_expected_loss_model_hand_example():
    # PDs (0.2, 0.5), EAD 100 each, R = 0.5 -> 0.5*100*(0.2+0.5) = 35
    assert expected_loss_model([0.2, 0.5], (100.0, 0.5)) == pytest.approx(35.0)


def test_expected_loss_model_rejects_bad_pds_but_tolerates_dust():
    with pytest.raises(ValueError, match="\\[0, 1\\]"):
        expected_loss_model([0.5, 1.1], (100.0, 0.5))
    dusty = expected_loss_model([1.0 + 5e-10, -5e-10], (100.0, 0.5))
    assert dusty == pytest.approx(50.0)


def test_expected_loss_actual_counts_defaulters_only():
    y = np.array([1, 0, 0, 1])
    # two defaulters, EAD 200, R 0.25 -> 2 * 0.75 * 200 = 300
    assert expected_loss_actual(y, (200.0, 0.25)) == pytest.approx(300.0)
    assert expected_loss_actual(np.ones(5), (200.0, 0.25)) == 0.0


def test_identity_when_pds_are_indicators():
    """Scoring with the true default indicators reproduces the actual loss."""
    rng = np.random.default_rng(0)
    y = rng.integers(0, 2, size=50)
    ead = rng.uniform(100, 2000, size=50)
    el_m = expected_loss_model(1.0 - y, (ead, 0.4))
    el_a = expected_loss_actual(y, (ead, 0.4))
    assert el_m == pytest.approx(el_a, rel=1e-15)


def test_relative_el_error():
    assert relative_el_error(110.0, 100.0) == pytest.approx(0.1)
    with pytest.raises(UndefinedMetricError, match="zero"):
        relative_el_error(5.0, 0.0)


def test_build_el_report_fields():
    y = np.array([1, 0, 1, 1])
    pds = np.array([0.1, 0.9, 0.2, 0.0])
    spec = PortfolioSpec(loan_amount=1000.0, recovery_rate=0.5)
    rep = build_el_report(pds, y, spec)
    assert rep.total_capital == 4000.0
    assert rep.el_actual == pytest.approx(500.0)
    assert rep.el_model == pytest.approx(0.5 * 1000 * 1.2)
    assert rep.eps_el == pytest.approx((600 - 500) / 500)
    assert rep.capital_relative_error == pytest.approx(100 / 4000)
    with pytest.raises(ValueError, match="labels"):
        build_el_report(pds, y[:2], spec)


def test_build_el_report_zero_actual_keeps_capital_metric():
    rep = build_el_report([0.3, 0.1], np.array([1, 1]),
                          PortfolioSpec(loan_amount=100.0, recovery_rate=0.5))
    assert rep.eps_el is None
    assert rep.capital_relative_error == pytest.approx(20.0 / 200.0)


# ---------------------------------------------------------------- bounds

def test_bound_formulas_hand_checked():
    assert income_lower_bound(3, 1000.0, 0.5, 0.9) == pytest.approx(
        3 * 1000 * (0.5 + 0.45))
    assert loss_upper_bound(3, 1000.0, 0.5, 0.9) == pytest.approx(
        3 * 1000 * 0.5 * 0.1)
    assert total_expected_loss([1.0, 0.5, 0.0], 1000.0, 0.5) == pytest.approx(
        3 * 500 - 500 * 1.5)
    with pytest.raises(ValueError):
        total_expected_loss([1.2], 1000.0, 0.5)


def test_default_grid():
    g = default_grid(0.01)
    assert g.shape == (101,)
    assert g[0] == 0.0 and g[-1] == 1.0
    assert g[37] == pytest.approx(0.37, abs=1e-12)
    assert default_grid(0.5).tolist() == [0.0, 0.5, 1.0]


# ---------------------------------------------------------------- curve

def _toy_curve():
    paybacks = np.array([0.95, 0.8, 0.6, 0.3])
    y = np.array([1, 1, 0, 0])
    spec = PortfolioSpec(loan_amount=1000.0, original_capital=1000.0,
                         recovery_rate=0.5)
    grid = np.array([0.0, 0.5, 0.9])
    return approval_curve(paybacks, grid, spec, y=y), paybacks, y


def test_approval_curve_counts_and_bounds():
    curve, paybacks, y = _toy_curve()
    np.testing.assert_array_equal(curve.m, [4, 3, 1])
    # worked example: m=(4,3,1) at p_min=(0, .5, .9), M=1000, R=0.5
    np.testing.assert_allclose(
        curve.loss_bound,
        [4000 * 0.5, 3000 * 0.5 * 0.5, 1000 * 0.5 * 0.1])
    np.testing.assert_allclose(
        curve.income_bound,
        [4000 * 0.5, 3000 * (0.5 + 0.25), 1000 * (0.5 + 0.45)])
    np.testing.assert_allclose(curve.m_frac_term,
                               [1.0, 3 / 4 * 0.5, 1 / 4 * 0.1])
    np.testing.assert_allclose(curve.avg_loss_bound, curve.loss_bound / 4)
    np.testing.assert_allclose(curve.net_profit_bound,
                               curve.income_bound - curve.m * 1000.0)
    # realized: both defaulters approved at 0, one at .5, none at .9
    np.testing.assert_allclose(curve.realized_loss, [1000.0, 500.0, 0.0])


def test_realized_loss_below_bound_on_grid():
    curve, _, _ = _toy_curve()
    assert (curve.realized_loss <= curve.loss_bound + 1e-9).all()


def test_approval_curve_without_labels():
    paybacks = np.array([0.9, 0.1])
    spec = PortfolioSpec()
    curve = approval_curve(paybacks, default_grid(0.5), spec)
    assert curve.realized_loss is None
    header, rows = curve.rows()
    assert header[5] == "realized_loss"
    assert all(r[5] == "" for r in rows)


def test_approval_curve_rejects_bad_grid():
    spec = PortfolioSpec()
    with pytest.raises(InputError, match="empty"):
        approval_curve(np.array([0.5]), np.array([]), spec)
    with pytest.raises(InputError, match="sorted"):
        approval_curve(np.array([0.5]), np.array([0.5, 0.1]), spec)
    with pytest.raises(InputError, match="sorted"):
        approval_curve(np.array([0.5]), np.array([0.5, 1.5]), spec)


def test_invert_loss_budget_worked_example():
    # approved counts (3, 2, 1) on grid (0, .5, .9), M=1000, R=0.5:
    # bounds are 1500, 500, 50; budget 300 -> first fit is p_min=0.9
    paybacks = np.array([0.95, 0.6, 0.3])
    spec = PortfolioSpec(loan_amount=1000.0, recovery_rate=0.5)
    curve = approval_curve(paybacks, np.array([0.0, 0.5, 0.9]), spec)
    p_min, bound = invert_loss_budget(curve, 300.0)
    assert p_min == 0.9
    assert bound == pytest.approx(50.0)
    # exactly on the bound counts as feasible
    p_min, bound = invert_loss_budget(curve, 500.0)
    assert p_min == 0.5
    assert bound == pytest.approx(500.0)


def test_invert_loss_budget_infeasible_carries_minimum():
    paybacks = np.array([0.99, 0.98])
    spec = PortfolioSpec(loan_amount=1000.0, recovery_rate=0.5)
    curve = approval_curve(paybacks, np.array([0.0, 0.5]), spec)
    with pytest.raises(InfeasibleBudgetError) as exc:
        invert_loss_budget(curve, 0.0)
    assert exc.value.min_achievable_bound == pytest.approx(
        2 * 1000 * 0.5 * 0.5)
    with pytest.raises(InputError, match="non-negative"):
        invert_loss_budget(curve, -1.0)


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.integers(5, 60))
def test_property_realized_loss_never_exceeds_bound_with_true_pds(seed, n):
    """With p_min-faithful scores (payback = 1 - true PD drawn first, then
    y sampled from it) the realized loss can exceed the bound; the bound
    holds for the IDENTITY case where paybacks match outcomes exactly."""
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, size=n)
    paybacks = y.astype(np.float64)      # oracle scores
    spec = PortfolioSpec(loan_amount=1000.0, recovery_rate=0.5)
    curve = approval_curve(paybacks, default_grid(0.1), spec, y=y)
    assert (curve.realized_loss <= curve.loss_bound + 1e-9).all()


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_property_curve_monotonicity(seed):
    rng = np.random.default_rng(seed)
    paybacks = rng.random(40)
    spec = PortfolioSpec()
    curve = approval_curve(paybacks, default_grid(0.05), spec)
    assert (np.diff(curve.m) <= 0).all()           # approvals shrink
    assert (curve.loss_bound >= 0).all()
    assert (curve.income_bound >= 0).all()
