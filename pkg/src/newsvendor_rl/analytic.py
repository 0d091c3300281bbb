"""Ground-truth newsvendor solver and Monte Carlo profit oracle.

Profit convention: ``unit_profit`` is the margin earned per unit sold, and
``unit_cost`` is sunk per unit stocked, so a period with stock q and demand d
pays ``unit_profit * min(d, q) - unit_cost * max(q - d, 0)``. The retail
price in the classical formulation is therefore ``unit_profit + unit_cost``,
which puts the critical fractile at ``p / (p + c)``.

Expectations are taken under the law that sampling actually produces
(demand clamped at zero). For nonnegative stock this differs from the
unclamped expectation only by a constant independent of q, so optimal
quantities are unaffected, and the Monte Carlo oracle agrees with the
quadrature path to within its standard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .distributions import DemandDistribution, Normal, ShiftedExponential, Uniform

__all__ = [
    "EconomicParams",
    "ProfitEstimate",
    "critical_fractile",
    "optimal_quantity",
    "expected_profit",
    "mc_expected_profit",
    "profit_curve",
    "single_period_profit",
]

_TAIL = 1e-9  # support truncation for quadrature


@dataclass(frozen=True)
class EconomicParams:
    """Per-unit margin and production cost; both strictly positive."""

    unit_profit: float
    unit_cost: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.unit_profit) and self.unit_profit > 0.0):
            raise ValueError(f"unit_profit must be > 0, got {self.unit_profit}")
        if not (math.isfinite(self.unit_cost) and self.unit_cost > 0.0):
            raise ValueError(f"unit_cost must be > 0, got {self.unit_cost}")


class ProfitEstimate(NamedTuple):
    quantity: float
    estimate: float
    std_error: float  # NaN when undefined (single sample)


def single_period_profit(params: EconomicParams, action, demand):
    """Margin on sold units minus cost sunk in unsold units.

    Accepts scalars or numpy arrays. Equivalent closed form:
    ``(p + c) * min(d, a) - c * a``.
    """
    p, c = params.unit_profit, params.unit_cost
    return (p + c) * np.minimum(demand, action) - c * action


def critical_fractile(params: EconomicParams) -> float:
    """Optimal demand-CDF level p / (p + c); always strictly inside (0, 1)."""
    return params.unit_profit / (params.unit_profit + params.unit_cost)


def optimal_quantity(dist: DemandDistribution, params: EconomicParams) -> float:
    """Profit-maximizing stock: the demand quantile at the critical fractile."""
    if isinstance(dist, Uniform) and dist.degenerate:
        return dist.low
    return dist.quantile(critical_fractile(params))


def expected_profit(dist: DemandDistribution, q: float, params: EconomicParams) -> float:
    """Exact expected single-period profit at stock level q >= 0.

    Uses closed forms for the point-mass and shifted-exponential laws and
    adaptive quadrature of the CDF otherwise, to absolute tolerance well
    below 1e-6 of the profit scale.
    """
    if q < 0.0:
        raise ValueError(f"stock quantity must be >= 0, got {q}")
    p, c = params.unit_profit, params.unit_cost
    return (p + c) * _expected_min(dist, q) - c * q


def _expected_min(dist: DemandDistribution, q: float) -> float:
    """E[min(q, D)] with D the clamped (nonnegative) demand."""
    if q == 0.0:
        return 0.0
    if isinstance(dist, Uniform) and dist.degenerate:
        return min(q, max(dist.low, 0.0))
    if isinstance(dist, Normal) and dist.sigma == 0.0:
        return min(q, max(dist.mu, 0.0))
    if isinstance(dist, ShiftedExponential):
        # E[min(q, D)] = shift + scale * (1 - exp(-(q - shift)/scale)), q >= shift
        if q <= dist.shift:
            return q
        return dist.shift - dist.scale * math.expm1(-(q - dist.shift) / dist.scale)
    # E[min(q, D)] = q - integral of the CDF from 0 to q.
    lower = max(0.0, dist.quantile(_TAIL))
    if q <= lower:
        return q
    shortfall, _ = integrate.quad(dist.cdf, lower, q, epsabs=1e-10, epsrel=1e-10, limit=200)
    return q - shortfall


def mc_expected_profit(
    dist: DemandDistribution,
    q: float,
    params: EconomicParams,
    n: int,
    rng: np.random.Generator,
) -> ProfitEstimate:
    """Monte Carlo estimate of the expected profit at q, with standard error.

    Independent of the quadrature path: simulates n single-period profits
    with the same reward formula the environment uses.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    if q < 0.0:
        raise ValueError(f"stock quantity must be >= 0, got {q}")
    demand = dist.sample_n(rng, n)
    profits = single_period_profit(params, q, demand)
    estimate = float(np.mean(profits))
    if n == 1:
        return ProfitEstimate(q, estimate, math.nan)
    std_error = float(np.std(profits, ddof=1) / math.sqrt(n))
    return ProfitEstimate(q, estimate, std_error)


def profit_curve(
    dist: DemandDistribution,
    params: EconomicParams,
    q_grid: Sequence[float],
    n_per_point: int,
    rng: np.random.Generator,
) -> list[ProfitEstimate]:
    """Monte Carlo profit estimates over an ascending stock grid.

    One demand sample of size ``n_per_point`` is drawn and shared by every
    grid point (common random numbers), so estimates are comparable across
    the grid and the argmax is a stable empirical optimum.
    """
    grid = [float(q) for q in q_grid]
    if not grid:
        raise ValueError("q_grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("q_grid must be strictly ascending")
    if any(q < 0.0 for q in grid):
        raise ValueError("q_grid values must be >= 0")
    if n_per_point < 1:
        raise ValueError(f"n_per_point must be >= 1, got {n_per_point}")
    demand = dist.sample_n(rng, n_per_point)
    sqrt_n = math.sqrt(n_per_point)
    curve = []
    for q in grid:
        profits = single_period_profit(params, q, demand)
        se = float(np.std(profits, ddof=1) / sqrt_n) if n_per_point > 1 else math.nan
        curve.append(ProfitEstimate(q, float(np.mean(profits)), se))
    return curve
