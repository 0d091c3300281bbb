import math

import numpy as np
import pytest
from scipy import stats

from newsvendor_rl.distributions import (
    Normal,
    ShiftedExponential,
    Uniform,
    distribution_from_dict,
    distribution_to_dict,
    standard_normal_quantile,
)

ALL_CONTINUOUS = [
    Normal(50, 20),
    Normal(0, 1),
    Normal(50, 5),
    ShiftedExponential(30, 5),
    ShiftedExponential(0, 2),
    Uniform(10, 40),
]
PROBS = [0.01, 0.1, 0.2857, 0.5, 2 / 3, 0.9, 0.99]


def test_degenerate_uniform_samples_constant():
    dist = Uniform(70, 70)
    rng = np.random.default_rng(0)
    assert all(dist.sample(rng) == 70.0 for _ in range(50))
    assert np.all(dist.sample_n(rng, 1000) == 70.0)


def test_shifted_exponential_support_lower_bound():
    dist = ShiftedExponential(shift=30, scale=5)
    rng = np.random.default_rng(1)
    assert np.all(dist.sample_n(rng, 10_000) >= 30.0)


def test_normal_sample_mean_large_n():
    """Law of large numbers: 1e6 draws from N(50, 20) average to 50 +- 0.2."""
    rng = np.random.default_rng(42)
    samples = Normal(50, 20).sample_n(rng, 10**6)
    assert abs(samples.mean() - 50.0) < 0.2


def test_samples_are_clamped_nonnegative():
    rng = np.random.default_rng(2)
    assert np.all(Normal(0, 5).sample_n(rng, 10_000) >= 0.0)


def test_cdf_anchors():
    assert Normal(50, 20).cdf(50) == pytest.approx(0.5)
    # exponential CDF value quoted for the day-3 optimum
    assert ShiftedExponential(30, 5).cdf(35.49) == pytest.approx(2 / 3, abs=1e-3)
    point = Uniform(70, 70)
    assert point.cdf(69.9) == 0.0
    assert point.cdf(70.0) == 1.0


def test_quantile_anchors():
    assert Normal(0, 1).quantile(0.285714) == pytest.approx(-0.56595, abs=1e-3)
    assert ShiftedExponential(30, 5).quantile(2 / 3) == pytest.approx(35.49, abs=0.01)
    assert Normal(50, 20).quantile(0.5) == pytest.approx(50.0)


def test_degenerate_uniform_quantile_is_constant():
    point = Uniform(70, 70)
    assert all(point.quantile(p) == 70.0 for p in PROBS)


def test_moments():
    assert (ShiftedExponential(30, 5).mean(), ShiftedExponential(30, 5).std()) == (35, 5)
    assert (Uniform(70, 70).mean(), Uniform(70, 70).std()) == (70, 0)
    assert (Normal(50, 20).mean(), Normal(50, 20).std()) == (50, 20)
    assert Uniform(10, 40).mean() == 25
    assert Uniform(10, 40).std() == pytest.approx(30 / math.sqrt(12))


@pytest.mark.parametrize("dist", ALL_CONTINUOUS, ids=str)
def test_cdf_monotone(dist):
    xs = np.linspace(dist.mean() - 5 * max(dist.std(), 1.0), dist.mean() + 5 * max(dist.std(), 1.0), 400)
    values = [dist.cdf(x) for x in xs]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(a <= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("dist", ALL_CONTINUOUS, ids=str)
@pytest.mark.parametrize("prob", PROBS)
def test_quantile_cdf_round_trip(dist, prob):
    assert abs(dist.cdf(dist.quantile(prob)) - prob) <= 1e-6


def test_standard_normal_quantile_matches_scipy():
    """Independent reference: scipy's ppf across the full open interval."""
    probs = np.concatenate(
        [np.array([1e-9, 1e-7, 1e-4, 1 - 1e-4, 1 - 1e-7, 1 - 1e-9]), np.linspace(0.001, 0.999, 97)]
    )
    for p in probs:
        assert standard_normal_quantile(float(p)) == pytest.approx(
            stats.norm.ppf(p), abs=1e-6
        )


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
def test_quantile_rejects_out_of_range(bad):
    with pytest.raises(ValueError, match="quantile probability"):
        Normal(0, 1).quantile(bad)
    with pytest.raises(ValueError, match="quantile probability"):
        standard_normal_quantile(bad)


@pytest.mark.parametrize(
    "dist",
    [Normal(50, 20), ShiftedExponential(30, 5), Uniform(10, 40), Normal(50, 5)],
    ids=str,
)
def test_empirical_cdf_matches_analytic(dist):
    """Kolmogorov-Smirnov distance of 1e5 seeded samples below 0.02."""
    rng = np.random.default_rng(7)
    samples = np.sort(dist.sample_n(rng, 10**5))
    n = samples.size
    analytic = np.array([dist.cdf(x) for x in samples])
    empirical_hi = np.arange(1, n + 1) / n
    empirical_lo = np.arange(0, n) / n
    ks = max(np.abs(empirical_hi - analytic).max(), np.abs(analytic - empirical_lo).max())
    assert ks < 0.02


def test_identical_seeds_identical_streams():
    dist = Normal(50, 20)
    a = dist.sample_n(np.random.default_rng(123), 1000)
    b = dist.sample_n(np.random.default_rng(123), 1000)
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize(
    "ctor",
    [
        lambda: Normal(50, -1),
        lambda: ShiftedExponential(-1, 5),
        lambda: ShiftedExponential(30, 0),
        lambda: Uniform(5, 4),
        lambda: Normal(float("nan"), 1),
    ],
)
def test_invalid_construction_rejected(ctor):
    with pytest.raises(ValueError):
        ctor()


def test_json_round_trip():
    for dist in [Normal(50, 20), ShiftedExponential(30, 5), Uniform(70, 70)]:
        assert distribution_from_dict(distribution_to_dict(dist)) == dist


def test_json_forms():
    assert distribution_from_dict({"kind": "normal", "mu": 50, "sigma": 20}) == Normal(50, 20)
    assert distribution_from_dict(
        {"kind": "shifted_exponential", "shift": 30, "scale": 5}
    ) == ShiftedExponential(30, 5)
    assert distribution_from_dict({"kind": "uniform", "low": 70, "high": 70}) == Uniform(70, 70)
    assert distribution_from_dict({"kind": "uniform", "mean": 80, "halfwidth": 0}) == Uniform(80, 80)


@pytest.mark.parametrize(
    "spec",
    [
        {"kind": "gamma", "shape": 2, "scale": 3},
        {"kind": "normal", "mu": 50},
        {"kind": "normal", "mu": 50, "sigma": 20, "extra": 1},
        {"mu": 50, "sigma": 20},
        [1, 2, 3],
    ],
)
def test_json_rejects_malformed(spec):
    with pytest.raises(ValueError):
        distribution_from_dict(spec)
