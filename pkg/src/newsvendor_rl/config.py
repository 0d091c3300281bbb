"""Experiment config files: strict JSON schema -> validated run objects.

The file has four sections plus bookkeeping::

    {
      "env":    {... demand laws, economics, bounds, episode length ...},
      "agent":  {... TD3 hyperparameters ...},
      "train":  {... episode count, phase boundaries, buffer size ...},
      "seeds":  [1, 2, 3],
      "output_dir": "runs/experiment1"
    }

Unknown keys anywhere are rejected so that typos fail loudly before a
40-minute run rather than silently falling back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .agent import Td3Hyper
from .analytic import EconomicParams
from .distributions import distribution_from_dict
from .env import EnvConfig
from .trainer import TrainConfig

__all__ = ["ExperimentConfig", "ConfigError", "load_experiment_config", "parse_experiment_config"]


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


_MISSING = object()


@dataclass(frozen=True)
class ExperimentConfig:
    env: EnvConfig
    hyper: Td3Hyper
    seeds: tuple[int, ...]
    output_dir: str
    total_episodes: int
    priming_end_timestep: int
    eval_start_timestep: int
    buffer_capacity: int
    exploration_noise_start: float | None
    raw: dict  # parsed JSON, echoed into run summaries

    def train_config(self, seed: int) -> TrainConfig:
        return TrainConfig(
            env=self.env,
            hyper=self.hyper,
            seed=seed,
            total_episodes=self.total_episodes,
            priming_end_timestep=self.priming_end_timestep,
            eval_start_timestep=self.eval_start_timestep,
            buffer_capacity=self.buffer_capacity,
            exploration_noise_start=self.exploration_noise_start,
        )


class _Section:
    """One config object level with known-key bookkeeping."""

    def __init__(self, data: dict, where: str) -> None:
        if not isinstance(data, dict):
            raise ConfigError(f"{where} must be a JSON object, got {type(data).__name__}")
        self._data = dict(data)
        self._where = where

    def take(self, key: str, kind, *, default=_MISSING):
        if key not in self._data:
            if default is _MISSING:
                raise ConfigError(f"{self._where}: missing required key {key!r}")
            return default
        value = self._data.pop(key)
        if value is None and default is not _MISSING:
            return default
        if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        if kind is int and isinstance(value, int) and not isinstance(value, bool):
            return value
        if kind in (str, list, dict) and isinstance(value, kind):
            return value
        raise ConfigError(f"{self._where}: key {key!r} must be {kind.__name__}")

    def finish(self) -> None:
        if self._data:
            raise ConfigError(f"{self._where}: unknown keys {sorted(self._data)}")


def parse_experiment_config(data: dict) -> ExperimentConfig:
    """Validate a parsed JSON document; raises ConfigError on any problem."""
    top = _Section(data, "config")
    env_sec = _Section(top.take("env", dict), "config.env")
    agent_sec = _Section(top.take("agent", dict, default={}), "config.agent")
    train_sec = _Section(top.take("train", dict, default={}), "config.train")
    seeds_raw = top.take("seeds", list)
    output_dir = top.take("output_dir", str)
    top.finish()

    if not seeds_raw or not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds_raw):
        raise ConfigError("config.seeds must be a nonempty list of integers")
    if len(set(seeds_raw)) != len(seeds_raw):
        raise ConfigError("config.seeds must not contain duplicates")

    dists_raw = env_sec.take("distributions", list)
    try:
        distributions = tuple(distribution_from_dict(d) for d in dists_raw)
        params = EconomicParams(
            unit_profit=env_sec.take("unit_profit", float),
            unit_cost=env_sec.take("unit_cost", float),
        )
        env = EnvConfig(
            distributions=distributions,
            params=params,
            action_low=env_sec.take("action_low", float, default=0.0),
            action_high=env_sec.take("action_high", float, default=100.0),
            episode_length=env_sec.take("episode_length", int, default=140),
            reward_transform=env_sec.take("reward_transform", str, default="identity"),
            reward_scale=env_sec.take("reward_scale", float, default=100.0),
        )
        env_sec.finish()

        hyper = Td3Hyper(
            action_low=env.action_low,
            action_high=env.action_high,
            gamma=agent_sec.take("gamma", float, default=0.99),
            tau=agent_sec.take("tau", float, default=0.005),
            policy_delay=agent_sec.take("policy_delay", int, default=2),
            batch_size=agent_sec.take("batch_size", int, default=256),
            lr=agent_sec.take("lr", float, default=1e-3),
            exploration_noise_std=agent_sec.take("exploration_noise_std", float, default=None),
            target_noise_std=agent_sec.take("target_noise_std", float, default=None),
            target_noise_clip=agent_sec.take("target_noise_clip", float, default=None),
        )
        agent_sec.finish()

        config = ExperimentConfig(
            env=env,
            hyper=hyper,
            seeds=tuple(seeds_raw),
            output_dir=output_dir,
            total_episodes=train_sec.take("total_episodes", int, default=300),
            priming_end_timestep=train_sec.take("priming_end_timestep", int, default=10_000),
            eval_start_timestep=train_sec.take("eval_start_timestep", int, default=25_000),
            buffer_capacity=train_sec.take("buffer_capacity", int, default=100_000),
            exploration_noise_start=train_sec.take("exploration_noise_start", float, default=None),
            raw=data,
        )
        train_sec.finish()
        # Surface cross-field inconsistencies (phase boundaries etc.) now.
        config.train_config(config.seeds[0])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config


def load_experiment_config(path) -> ExperimentConfig:
    """Read and validate a config file; ConfigError covers I/O and JSON faults."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_experiment_config(data)
