import math

import numpy as np
import pytest

from newsvendor_rl.analytic import (
    EconomicParams,
    critical_fractile,
    expected_profit,
    mc_expected_profit,
    optimal_quantity,
    profit_curve,
    single_period_profit,
)
from newsvendor_rl.distributions import Normal, ShiftedExponential, Uniform

EXP1 = EconomicParams(unit_profit=2, unit_cost=5)
EXP2 = EconomicParams(unit_profit=10, unit_cost=5)


def test_critical_fractile_values():
    assert critical_fractile(EXP1) == pytest.approx(2 / 7)
    assert critical_fractile(EXP2) == pytest.approx(2 / 3)
    assert critical_fractile(EconomicParams(3, 3)) == 0.5


@pytest.mark.parametrize("p,c", [(0, 5), (-2, 5), (2, 0), (2, -5)])
def test_params_require_positive_margin_and_cost(p, c):
    with pytest.raises(ValueError):
        EconomicParams(p, c)


def test_optimal_quantity_anchors():
    assert optimal_quantity(Normal(50, 20), EXP1) == pytest.approx(38.68, abs=0.02)
    assert optimal_quantity(ShiftedExponential(30, 5), EXP2) == pytest.approx(35.49, abs=0.01)
    assert optimal_quantity(Uniform(70, 70), EXP2) == 70.0
    # frozen from the Monte Carlo grid argmax oracle (step 0.05, n = 1e6)
    assert optimal_quantity(Normal(50, 5), EXP2) == pytest.approx(52.15, abs=0.05)


def test_expected_profit_degenerate_uniform():
    assert expected_profit(Uniform(70, 70), 70, EXP2) == pytest.approx(700.0)
    assert expected_profit(Uniform(70, 70), 80, EXP2) == pytest.approx(650.0)
    assert expected_profit(Uniform(70, 70), 0, EXP2) == 0.0


def test_expected_profit_rejects_negative_stock():
    with pytest.raises(ValueError, match="stock quantity"):
        expected_profit(Normal(50, 20), -1.0, EXP1)


def test_expected_profit_matches_monte_carlo():
    """Quadrature vs the independent sampling oracle, within 3 standard errors."""
    rng = np.random.default_rng(11)
    for dist, params, q in [
        (Normal(50, 20), EXP1, 38.68),
        (Normal(50, 20), EXP1, 60.0),
        (ShiftedExponential(30, 5), EXP2, 35.49),
        (Uniform(10, 40), EXP2, 30.0),
    ]:
        exact = expected_profit(dist, q, params)
        est = mc_expected_profit(dist, q, params, 10**6, rng)
        assert abs(est.estimate - exact) < 3 * est.std_error


def test_expected_profit_shifted_exponential_closed_form_vs_quadrature():
    """The closed form must agree with direct numerical integration of the CDF."""
    from scipy import integrate

    dist = ShiftedExponential(30, 5)
    for q in [10.0, 30.0, 35.49, 50.0, 80.0]:
        shortfall, _ = integrate.quad(dist.cdf, 0.0, q, limit=200)
        reference = (10 + 5) * (q - shortfall) - 5 * q
        assert expected_profit(dist, q, EXP2) == pytest.approx(reference, abs=1e-6)


def test_mc_expected_profit_degenerate_cases():
    rng = np.random.default_rng(3)
    est = mc_expected_profit(Uniform(70, 70), 70, EXP2, 500, rng)
    assert est.estimate == 700.0
    assert est.std_error == 0.0
    assert mc_expected_profit(Normal(50, 20), 0.0, EXP1, 1000, rng).estimate == 0.0
    single = mc_expected_profit(Normal(50, 20), 40.0, EXP1, 1, rng)
    assert math.isnan(single.std_error)


def test_profit_curve_argmax_degenerate():
    rng = np.random.default_rng(5)
    curve = profit_curve(Uniform(70, 70), EXP2, np.arange(0, 101, 1.0), 100, rng)
    best = max(curve, key=lambda pt: pt.estimate)
    assert best.quantity == 70.0


def test_profit_curve_argmax_normal_exp1():
    rng = np.random.default_rng(6)
    grid = np.arange(20, 60.01, 0.25)
    curve = profit_curve(Normal(50, 20), EXP1, grid, 200_000, rng)
    best = max(curve, key=lambda pt: pt.estimate)
    assert abs(best.quantity - 38.68) <= 0.5


def test_profit_curve_validates_grid():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError, match="nonempty"):
        profit_curve(Normal(50, 20), EXP1, [], 10, rng)
    with pytest.raises(ValueError, match="ascending"):
        profit_curve(Normal(50, 20), EXP1, [1.0, 1.0, 2.0], 10, rng)


def test_expected_profit_concave_on_grid():
    for dist, params in [(Normal(50, 20), EXP1), (ShiftedExponential(30, 5), EXP2), (Uniform(10, 40), EXP2)]:
        qs = np.linspace(0.5, 90, 180)
        values = np.array([expected_profit(dist, q, params) for q in qs])
        second_diff = values[2:] - 2 * values[1:-1] + values[:-2]
        assert np.all(second_diff <= 1e-6)


def test_optimal_quantity_maximizes_expected_profit():
    for dist, params in [(Normal(50, 20), EXP1), (ShiftedExponential(30, 5), EXP2)]:
        q_star = optimal_quantity(dist, params)
        best = expected_profit(dist, q_star, params)
        scale = abs(best) + 1.0
        for q in np.linspace(1.0, 95.0, 189):
            assert best >= expected_profit(dist, q, params) - 1e-4 * scale


def test_price_scaling_invariance():
    """Scaling (p, c) by k leaves the fractile and optimum fixed, scales profit by k."""
    dist = Normal(50, 20)
    base = EconomicParams(2, 5)
    for k in [0.5, 3.0, 10.0]:
        scaled = EconomicParams(2 * k, 5 * k)
        assert critical_fractile(scaled) == pytest.approx(critical_fractile(base))
        assert optimal_quantity(dist, scaled) == pytest.approx(optimal_quantity(dist, base))
        for q in [10.0, 38.68, 70.0]:
            assert expected_profit(dist, q, scaled) == pytest.approx(
                k * expected_profit(dist, q, base), rel=1e-9
            )


def test_optimum_sits_on_correct_side_of_mean():
    dist = Normal(50, 20)
    assert optimal_quantity(dist, EconomicParams(10, 5)) > 50  # margin beats cost
    assert optimal_quantity(dist, EconomicParams(2, 5)) < 50
    assert optimal_quantity(dist, EconomicParams(4, 4)) == pytest.approx(50)


def test_single_period_profit_vectorized():
    d = np.array([50.0, 30.0, 0.0])
    out = single_period_profit(EXP1, 40.0, d)
    np.testing.assert_allclose(out, [80.0, 10.0, -200.0])
