"""Seven-day cyclic newsvendor environment.

Each step the agent commits a stock level, demand is drawn from the current
day's distribution, and the profit comes back as reward. The day advances
modulo 7 regardless of the action, and an episode ends after a fixed number
of steps (a time limit, not a terminal state).

The reward handed to the agent may be transformed (divide by a scale, then
cube) to sharpen the learning signal; the untransformed profit from the most
recent step is kept on ``last_raw_reward`` for metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .analytic import EconomicParams, single_period_profit
from .distributions import DemandDistribution

__all__ = ["EnvConfig", "NewsvendorEnv", "one_hot", "reward", "N_DAYS"]

N_DAYS = 7

RewardTransform = Literal["identity", "cube"]


def one_hot(day: int) -> np.ndarray:
    """Day index 0..6 as a 7-vector with a single 1."""
    if not 0 <= day < N_DAYS:
        raise ValueError(f"day must be in 0..6, got {day}")
    v = np.zeros(N_DAYS)
    v[day] = 1.0
    return v


def reward(params: EconomicParams, action: float, demand: float) -> float:
    """Single-period profit: margin on sold units minus cost of unsold ones."""
    if action < 0.0:
        raise ValueError(f"action must be >= 0, got {action}")
    if demand < 0.0:
        raise ValueError(f"demand must be >= 0, got {demand}")
    return float(single_period_profit(params, action, demand))


@dataclass(frozen=True)
class EnvConfig:
    """Environment parameters: one demand law per weekday plus economics.

    ``reward_scale`` divides the raw profit before the transform is applied;
    the identity transform ignores it.
    """

    distributions: tuple[DemandDistribution, ...]
    params: EconomicParams
    action_low: float = 0.0
    action_high: float = 100.0
    episode_length: int = 140
    reward_transform: RewardTransform = "identity"
    reward_scale: float = 100.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "distributions", tuple(self.distributions))
        if len(self.distributions) != N_DAYS:
            raise ValueError(f"need exactly {N_DAYS} distributions, got {len(self.distributions)}")
        if not all(isinstance(d, DemandDistribution) for d in self.distributions):
            raise ValueError("distributions must be DemandDistribution instances")
        if not self.action_low < self.action_high:
            raise ValueError(
                f"action bounds must satisfy low < high, got ({self.action_low}, {self.action_high})"
            )
        if self.action_low < 0.0:
            raise ValueError(f"action_low must be >= 0 (stock cannot be negative), got {self.action_low}")
        if self.episode_length < 1:
            raise ValueError(f"episode_length must be >= 1, got {self.episode_length}")
        if self.reward_transform not in ("identity", "cube"):
            raise ValueError(f"unknown reward transform: {self.reward_transform!r}")
        if not (math.isfinite(self.reward_scale) and self.reward_scale > 0.0):
            raise ValueError(f"reward_scale must be > 0, got {self.reward_scale}")

    def transform_reward(self, raw: float) -> float:
        if self.reward_transform == "cube":
            return (raw / self.reward_scale) ** 3
        return raw


class NewsvendorEnv:
    """Mutable environment state: current day and position within the episode."""

    def __init__(self, config: EnvConfig) -> None:
        self.config = config
        self._day = 0
        self._steps_taken = 0
        self._done = False
        self.last_raw_reward: float = math.nan
        self.last_demand: float = math.nan

    def reset(self) -> int:
        """Back to day 0 at the start of a fresh episode; returns the state."""
        self._day = 0
        self._steps_taken = 0
        self._done = False
        return self._day

    def observe(self) -> int:
        """Current day index; no side effects."""
        return self._day

    def step(self, action: float, rng: np.random.Generator) -> tuple[float, int, bool]:
        """Advance one day: sample demand, pay out profit, roll the calendar.

        Out-of-range actions are clipped to the configured bounds. Returns
        ``(reward, next_state, done)`` where the reward has the configured
        transform applied; stepping a finished episode raises RuntimeError.
        """
        if self._done:
            raise RuntimeError("episode is done; call reset() before stepping again")
        cfg = self.config
        a = float(min(max(action, cfg.action_low), cfg.action_high))
        demand = cfg.distributions[self._day].sample(rng)
        raw = reward(cfg.params, a, demand)
        self.last_raw_reward = raw
        self.last_demand = demand
        self._day = (self._day + 1) % N_DAYS
        self._steps_taken += 1
        self._done = self._steps_taken >= cfg.episode_length
        return cfg.transform_reward(raw), self._day, self._done
