"""Multi-day newsvendor: demand simulation, analytic solver, and a TD3 agent.

The package is small enough to import flat::

    from newsvendor_rl import (
        Normal, ShiftedExponential, Uniform,
        EconomicParams, critical_fractile, optimal_quantity, expected_profit,
        EnvConfig, NewsvendorEnv,
        Td3Agent, Td3Hyper, ReplayBuffer,
        TrainConfig, run, evaluate,
    )
"""

from .analytic import (
    EconomicParams,
    critical_fractile,
    expected_profit,
    mc_expected_profit,
    optimal_quantity,
    profit_curve,
    single_period_profit,
)
from .agent import Td3Agent, Td3Diagnostics, Td3Hyper, TransitionBatch, scale_action
from .distributions import (
    DemandDistribution,
    Normal,
    ShiftedExponential,
    Uniform,
    distribution_from_dict,
    distribution_to_dict,
    standard_normal_cdf,
    standard_normal_quantile,
)
from .env import EnvConfig, NewsvendorEnv, one_hot, reward
from .replay import ReplayBuffer, Transition
from .trainer import DayEvalStats, EpisodeRecord, Metrics, TrainConfig, evaluate, run

__all__ = [
    "DemandDistribution",
    "Normal",
    "ShiftedExponential",
    "Uniform",
    "distribution_from_dict",
    "distribution_to_dict",
    "standard_normal_cdf",
    "standard_normal_quantile",
    "EconomicParams",
    "critical_fractile",
    "optimal_quantity",
    "expected_profit",
    "mc_expected_profit",
    "profit_curve",
    "single_period_profit",
    "EnvConfig",
    "NewsvendorEnv",
    "one_hot",
    "reward",
    "ReplayBuffer",
    "Transition",
    "Td3Agent",
    "Td3Hyper",
    "Td3Diagnostics",
    "TransitionBatch",
    "scale_action",
    "TrainConfig",
    "Metrics",
    "EpisodeRecord",
    "DayEvalStats",
    "run",
    "evaluate",
]

__version__ = "0.1.0"
