"""Three-phase experiment driver: priming, training, evaluation.

A run walks ``total_episodes`` episodes of fixed length through one
environment. The global timestep picks the phase: before
``priming_end_timestep`` actions are uniform random and nothing trains
(buffer priming); until ``eval_start_timestep`` the agent acts with
exploration noise and trains once per step; afterwards the frozen policy
acts noise-free and nothing trains. Transitions enter the replay buffer
during the first two phases only.

Exploration noise may decay linearly from ``exploration_noise_start`` down
to the agent's configured level across the training phase; with the field
unset the level is constant.

Everything is driven by named child streams of one seed, so a run is a pure
function of its config: identical configs give bit-identical metrics.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .agent import Td3Agent, Td3Hyper
from .analytic import optimal_quantity
from .env import N_DAYS, EnvConfig, NewsvendorEnv
from .replay import ReplayBuffer, Transition

__all__ = [
    "TrainConfig",
    "Metrics",
    "EpisodeRecord",
    "DayEvalStats",
    "run",
    "evaluate",
    "write_learning_curve",
    "write_eval_actions",
    "write_run_summary",
]

PHASE_PRIMING = "priming"
PHASE_TRAINING = "training"
PHASE_EVALUATION = "evaluation"


@dataclass(frozen=True)
class TrainConfig:
    env: EnvConfig
    hyper: Td3Hyper
    seed: int
    total_episodes: int = 300
    priming_end_timestep: int = 10_000
    eval_start_timestep: int = 25_000
    buffer_capacity: int = 100_000
    exploration_noise_start: float | None = None

    def __post_init__(self) -> None:
        if self.total_episodes < 1:
            raise ValueError(f"total_episodes must be >= 1, got {self.total_episodes}")
        total = self.total_timesteps
        if not 0 < self.priming_end_timestep < self.eval_start_timestep <= total:
            raise ValueError(
                "need 0 < priming_end_timestep < eval_start_timestep <= "
                f"total timesteps ({total}), got {self.priming_end_timestep}, "
                f"{self.eval_start_timestep}"
            )
        if self.buffer_capacity < 1:
            raise ValueError(f"buffer_capacity must be >= 1, got {self.buffer_capacity}")
        if (self.env.action_low, self.env.action_high) != (
            self.hyper.action_low,
            self.hyper.action_high,
        ):
            raise ValueError("environment and agent disagree on action bounds")
        if self.exploration_noise_start is not None and self.exploration_noise_start < 0.0:
            raise ValueError("exploration_noise_start must be >= 0")

    @property
    def episode_length(self) -> int:
        return self.env.episode_length

    @property
    def total_timesteps(self) -> int:
        return self.total_episodes * self.env.episode_length

    def phase_of(self, timestep: int) -> str:
        if timestep < self.priming_end_timestep:
            return PHASE_PRIMING
        if timestep < self.eval_start_timestep:
            return PHASE_TRAINING
        return PHASE_EVALUATION

    def exploration_noise_at(self, timestep: int) -> float:
        """Noise std used at a training-phase timestep (linear decay if set)."""
        final = self.hyper.exploration_noise_std
        if self.exploration_noise_start is None:
            return final
        span = self.eval_start_timestep - self.priming_end_timestep
        frac = (timestep - self.priming_end_timestep) / span
        return self.exploration_noise_start + frac * (final - self.exploration_noise_start)


@dataclass(frozen=True)
class EpisodeRecord:
    episode: int
    total_raw_reward: float
    phase: str  # phase of the episode's first timestep


@dataclass(frozen=True)
class DayEvalStats:
    day: int
    mean_action: float
    std_action: float
    n_actions: int
    analytic_optimum: float


@dataclass
class Metrics:
    """Everything a run produces, in deterministic order."""

    seed: int
    learning_curve: list[EpisodeRecord]
    eval_actions_by_day: list[list[float]]  # index = day 0..6
    day_optima: list[float]
    priming_end_timestep: int
    eval_start_timestep: int
    total_timesteps: int
    train_steps_run: int
    buffer_size_after_priming: int
    wall_time_seconds: float = 0.0

    def phase_mean_reward(self, phase: str) -> float:
        totals = [r.total_raw_reward for r in self.learning_curve if r.phase == phase]
        if not totals:
            raise ValueError(f"no episodes labeled {phase!r}")
        return float(np.mean(totals))


def run(config: TrainConfig) -> Metrics:
    """Execute one full experiment; see the module docstring for the phases."""
    started = time.perf_counter()
    streams = np.random.SeedSequence(config.seed).spawn(4)
    rng_init, rng_env, rng_action, rng_learn = (np.random.default_rng(s) for s in streams)

    env = NewsvendorEnv(config.env)
    agent = Td3Agent(config.hyper, rng_init)
    buffer = ReplayBuffer(config.buffer_capacity)
    low, high = config.hyper.action_low, config.hyper.action_high

    curve: list[EpisodeRecord] = []
    eval_actions: list[list[float]] = [[] for _ in range(N_DAYS)]
    train_steps = 0
    buffer_after_priming = 0

    t = 0
    for episode in range(config.total_episodes):
        state = env.reset()
        episode_phase = config.phase_of(t)
        total_raw = 0.0
        done = False
        while not done:
            phase = config.phase_of(t)
            if phase == PHASE_PRIMING:
                action = float(rng_action.uniform(low, high))
            elif phase == PHASE_TRAINING:
                noise = config.exploration_noise_at(t)
                action = agent.select_action(state, noise, rng_action)
            else:
                action = agent.select_action(state, 0.0, rng_action)
            reward, next_state, done = env.step(action, rng_env)
            if phase != PHASE_EVALUATION:
                buffer.push(Transition(state, action, reward, next_state, done))
            else:
                eval_actions[state].append(action)
            if phase == PHASE_TRAINING:
                agent.train_step(buffer, rng_learn)
                train_steps += 1
            total_raw += env.last_raw_reward
            state = next_state
            t += 1
            if t == config.priming_end_timestep:
                buffer_after_priming = len(buffer)
        curve.append(EpisodeRecord(episode, total_raw, episode_phase))

    optima = [
        optimal_quantity(dist, config.env.params) for dist in config.env.distributions
    ]
    return Metrics(
        seed=config.seed,
        learning_curve=curve,
        eval_actions_by_day=eval_actions,
        day_optima=optima,
        priming_end_timestep=config.priming_end_timestep,
        eval_start_timestep=config.eval_start_timestep,
        total_timesteps=t,
        train_steps_run=train_steps,
        buffer_size_after_priming=buffer_after_priming,
        wall_time_seconds=time.perf_counter() - started,
    )


def evaluate(metrics: Metrics) -> list[DayEvalStats]:
    """Per-day evaluation summary: action mean/std next to the analytic optimum."""
    if all(len(actions) == 0 for actions in metrics.eval_actions_by_day):
        raise ValueError("run has no evaluation-phase actions to summarize")
    table = []
    for day in range(N_DAYS):
        actions = np.array(metrics.eval_actions_by_day[day])
        table.append(
            DayEvalStats(
                day=day,
                mean_action=float(actions.mean()) if actions.size else math.nan,
                std_action=float(actions.std()) if actions.size else math.nan,
                n_actions=int(actions.size),
                analytic_optimum=metrics.day_optima[day],
            )
        )
    return table


# -- output files -----------------------------------------------------------


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _csv_text(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    import io

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def write_learning_curve(metrics: Metrics, path) -> None:
    rows = [
        (r.episode, repr(r.total_raw_reward), r.phase) for r in metrics.learning_curve
    ]
    _atomic_write(path, _csv_text(("episode", "total_raw_reward", "phase"), rows))


def write_eval_actions(metrics: Metrics, path) -> None:
    rows = [
        (s.day, repr(s.mean_action), repr(s.std_action), repr(s.analytic_optimum))
        for s in evaluate(metrics)
    ]
    _atomic_write(
        path, _csv_text(("day", "mean_action", "std_action", "analytic_optimum"), rows)
    )


def write_run_summary(metrics: Metrics, config_echo: dict, path) -> None:
    summary = {
        "seed": metrics.seed,
        "total_timesteps": metrics.total_timesteps,
        "train_steps_run": metrics.train_steps_run,
        "priming_end_timestep": metrics.priming_end_timestep,
        "eval_start_timestep": metrics.eval_start_timestep,
        "buffer_size_after_priming": metrics.buffer_size_after_priming,
        "wall_time_seconds": metrics.wall_time_seconds,
        "eval_day_stats": [vars(s) for s in evaluate(metrics)],
        "config": config_echo,
    }
    _atomic_write(path, json.dumps(summary, indent=2) + "\n")
