"""Twin-delayed deterministic policy gradient agent, built on the nn module.

Six networks: an actor (one-hot day -> tanh head, rescaled to the action
interval), twin critics (day + action -> value), and a slow-moving target
copy of each. Critics regress on bootstrap targets that use the smaller of
the two target critics' estimates at a smoothed target action; the actor
ascends critic 1, one step per ``policy_delay`` critic updates, after which
every target is pulled a fraction ``tau`` toward its main network.

Episode ends here are time limits rather than terminal states (demand keeps
arriving), so targets always bootstrap across the done flag.

The action fed to a critic is normalized to [-1, 1] so that its scale
matches the one-hot state coordinates; critics condition badly when one
input coordinate spans two orders of magnitude more than the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import nn
from .env import N_DAYS, one_hot
from .replay import ReplayBuffer, Transition

__all__ = ["Td3Hyper", "Td3Agent", "Td3Diagnostics", "TransitionBatch", "scale_action"]

ACTOR_LAYERS = (N_DAYS, 64, 32, 16, 1)
CRITIC_LAYERS = (N_DAYS + 1, 64, 32, 16, 1)

_EYE = np.eye(N_DAYS)


def scale_action(raw: float, low: float, high: float) -> float:
    """Map a tanh output in (-1, 1) linearly onto (low, high)."""
    return low + (raw + 1.0) * 0.5 * (high - low)


@dataclass(frozen=True)
class Td3Hyper:
    """Agent hyperparameters; noise fields default relative to the action range.

    ``exploration_noise_std`` defaults to 1/30 of the action range;
    ``target_noise_std`` defaults to the exploration level and
    ``target_noise_clip`` to twice that.
    """

    action_low: float
    action_high: float
    gamma: float = 0.99
    tau: float = 0.005
    policy_delay: int = 2
    batch_size: int = 256
    lr: float = 1e-3
    exploration_noise_std: float | None = None
    target_noise_std: float | None = None
    target_noise_clip: float | None = None

    def __post_init__(self) -> None:
        if not self.action_low < self.action_high:
            raise ValueError(f"need action_low < action_high, got ({self.action_low}, {self.action_high})")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.policy_delay < 1:
            raise ValueError(f"policy_delay must be >= 1, got {self.policy_delay}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.lr <= 0.0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        span = self.action_high - self.action_low
        if self.exploration_noise_std is None:
            object.__setattr__(self, "exploration_noise_std", span / 30.0)
        if self.target_noise_std is None:
            object.__setattr__(self, "target_noise_std", self.exploration_noise_std)
        if self.target_noise_clip is None:
            object.__setattr__(self, "target_noise_clip", 2.0 * self.target_noise_std)
        for name in ("exploration_noise_std", "target_noise_std", "target_noise_clip"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass
class TransitionBatch:
    """Column view of a sampled batch of transitions."""

    states: np.ndarray  # int day indices
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray

    @classmethod
    def from_transitions(cls, transitions: list[Transition]) -> "TransitionBatch":
        if not transitions:
            raise ValueError("batch must be nonempty")
        return cls(
            states=np.array([t.state for t in transitions], dtype=np.int64),
            actions=np.array([t.action for t in transitions]),
            rewards=np.array([t.reward for t in transitions]),
            next_states=np.array([t.next_state for t in transitions], dtype=np.int64),
            dones=np.array([t.done for t in transitions], dtype=np.float64),
        )

    def __len__(self) -> int:
        return len(self.states)


@dataclass
class Td3Diagnostics:
    """Per-train-step record: pre-update losses and, when due, the actor objective."""

    critic_loss1: float
    critic_loss2: float
    actor_objective: float | None
    update_counter: int


class Td3Agent:
    def __init__(self, hyper: Td3Hyper, rng: np.random.Generator) -> None:
        self.hyper = hyper
        self.actor = nn.Mlp.init(ACTOR_LAYERS, "tanh", rng)
        self.critic1 = nn.Mlp.init(CRITIC_LAYERS, "linear", rng)
        self.critic2 = nn.Mlp.init(CRITIC_LAYERS, "linear", rng)
        self.target_actor = self.actor.copy()
        self.target_critic1 = self.critic1.copy()
        self.target_critic2 = self.critic2.copy()
        self.actor_opt = nn.AdamState.for_net(self.actor)
        self.critic1_opt = nn.AdamState.for_net(self.critic1)
        self.critic2_opt = nn.AdamState.for_net(self.critic2)
        self.update_counter = 0
        self._mid = 0.5 * (hyper.action_low + hyper.action_high)
        self._half = 0.5 * (hyper.action_high - hyper.action_low)

    # -- acting ------------------------------------------------------------

    def select_action(self, state: int, noise_std: float, rng: np.random.Generator) -> float:
        """Deterministic policy action plus Gaussian noise, clipped to bounds.

        ``noise_std = 0`` gives the evaluation-mode action (no rng draw).
        """
        h = self.hyper
        raw, _ = nn.forward(self.actor, one_hot(state))
        a = scale_action(float(raw[0]), h.action_low, h.action_high)
        if noise_std > 0.0:
            a += float(rng.normal(0.0, noise_std))
        return float(min(max(a, h.action_low), h.action_high))

    def policy_actions(self, states: np.ndarray, net: nn.Mlp | None = None) -> np.ndarray:
        """Noise-free actions for a vector of day indices (actor or target actor)."""
        raw, _ = nn.forward(net if net is not None else self.actor, _EYE[states])
        return scale_action(raw[:, 0], self.hyper.action_low, self.hyper.action_high)

    def _critic_input(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        normalized = (actions - self._mid) / self._half
        return np.concatenate([_EYE[states], normalized[:, None]], axis=1)

    # -- learning ----------------------------------------------------------

    def compute_targets(self, batch: TransitionBatch, rng: np.random.Generator) -> np.ndarray:
        """Bootstrap targets from the target networks with smoothed actions.

        The done flag marks a time limit, not a terminal state, so the
        bootstrap term is kept for every transition.
        """
        h = self.hyper
        next_actions = self.policy_actions(batch.next_states, self.target_actor)
        if h.target_noise_std > 0.0:
            eps = rng.normal(0.0, h.target_noise_std, size=len(batch))
            np.clip(eps, -h.target_noise_clip, h.target_noise_clip, out=eps)
            next_actions = next_actions + eps
        np.clip(next_actions, h.action_low, h.action_high, out=next_actions)
        x = self._critic_input(batch.next_states, next_actions)
        q1, _ = nn.forward(self.target_critic1, x)
        q2, _ = nn.forward(self.target_critic2, x)
        return batch.rewards + h.gamma * np.minimum(q1[:, 0], q2[:, 0])

    def update_critics(self, batch: TransitionBatch, rng: np.random.Generator) -> tuple[float, float]:
        """One Adam step per critic toward shared targets; returns pre-step MSEs."""
        y = self.compute_targets(batch, rng)
        x = self._critic_input(batch.states, batch.actions)
        losses = []
        for net, opt in ((self.critic1, self.critic1_opt), (self.critic2, self.critic2_opt)):
            q, cache = nn.forward(net, x)
            residual = q[:, 0] - y
            losses.append(float(np.mean(residual**2)))
            grad_out = (2.0 / len(batch)) * residual[:, None]
            grads, _ = nn.backward(net, cache, grad_out)
            nn.adam_step(net, grads, opt, self.hyper.lr)
        return losses[0], losses[1]

    def update_actor_and_targets(self, batch: TransitionBatch) -> float:
        """Ascend critic 1 along the policy, then soft-update all targets.

        Returns the pre-update mean Q of the policy's actions on the batch.
        The gradient reaches the actor through the critic's action input,
        including the tanh head and the rescaling to action units.
        """
        h = self.hyper
        states_x = _EYE[batch.states]
        raw, actor_cache = nn.forward(self.actor, states_x)
        actions = scale_action(raw[:, 0], h.action_low, h.action_high)
        x = self._critic_input(batch.states, actions)
        q, critic_cache = nn.forward(self.critic1, x)
        objective = float(np.mean(q[:, 0]))
        upstream = np.full((len(batch), 1), 1.0 / len(batch))
        _, input_grad = nn.backward(self.critic1, critic_cache, upstream)
        # d(normalized action)/d(raw) = (half-range / half-range) = 1
        grad_raw = input_grad[:, N_DAYS:]
        actor_grads, _ = nn.backward(self.actor, actor_cache, grad_raw)
        ascent = nn.MlpGrads(
            [-g for g in actor_grads.weights], [-g for g in actor_grads.biases]
        )
        nn.adam_step(self.actor, ascent, self.actor_opt, h.lr)
        for main, target in (
            (self.actor, self.target_actor),
            (self.critic1, self.target_critic1),
            (self.critic2, self.target_critic2),
        ):
            polyak_update(target, main, h.tau)
        return objective

    def train_step(self, buffer: ReplayBuffer, rng: np.random.Generator) -> Td3Diagnostics:
        """Sample one batch and run the critic update, plus the delayed actor update."""
        batch = TransitionBatch.from_transitions(
            buffer.sample_batch(self.hyper.batch_size, rng)
        )
        loss1, loss2 = self.update_critics(batch, rng)
        actor_objective = None
        if self.update_counter % self.hyper.policy_delay == 0:
            actor_objective = self.update_actor_and_targets(batch)
        self.update_counter += 1
        return Td3Diagnostics(loss1, loss2, actor_objective, self.update_counter)

    # -- persistence ---------------------------------------------------------

    def save(self, path) -> None:
        """Checkpoint all six networks, optimizer states, and counters (npz)."""
        arrays: dict[str, np.ndarray] = {
            "version": np.array(1),
            "update_counter": np.array(self.update_counter),
        }
        for name, net in self._named_nets():
            for l, (w, b) in enumerate(zip(net.weights, net.biases)):
                arrays[f"{name}_w{l}"] = w
                arrays[f"{name}_b{l}"] = b
        for name, opt in self._named_opts():
            arrays[f"{name}_t"] = np.array(opt.t)
            for l in range(len(opt.m_weights)):
                arrays[f"{name}_mw{l}"] = opt.m_weights[l]
                arrays[f"{name}_vw{l}"] = opt.v_weights[l]
                arrays[f"{name}_mb{l}"] = opt.m_biases[l]
                arrays[f"{name}_vb{l}"] = opt.v_biases[l]
        np.savez(path, **arrays)

    def load(self, path) -> None:
        """Restore a checkpoint saved by :meth:`save` (bit-exact)."""
        with np.load(path) as data:
            if int(data["version"]) != 1:
                raise ValueError(f"unsupported checkpoint version {data['version']}")
            self.update_counter = int(data["update_counter"])
            for name, net in self._named_nets():
                for l in range(net.n_layers):
                    net.weights[l] = data[f"{name}_w{l}"].copy()
                    net.biases[l] = data[f"{name}_b{l}"].copy()
            for name, opt in self._named_opts():
                opt.t = int(data[f"{name}_t"])
                for l in range(len(opt.m_weights)):
                    opt.m_weights[l] = data[f"{name}_mw{l}"].copy()
                    opt.v_weights[l] = data[f"{name}_vw{l}"].copy()
                    opt.m_biases[l] = data[f"{name}_mb{l}"].copy()
                    opt.v_biases[l] = data[f"{name}_vb{l}"].copy()

    def _named_nets(self):
        return (
            ("actor", self.actor),
            ("critic1", self.critic1),
            ("critic2", self.critic2),
            ("target_actor", self.target_actor),
            ("target_critic1", self.target_critic1),
            ("target_critic2", self.target_critic2),
        )

    def _named_opts(self):
        return (
            ("actor_opt", self.actor_opt),
            ("critic1_opt", self.critic1_opt),
            ("critic2_opt", self.critic2_opt),
        )


def polyak_update(target: nn.Mlp, main: nn.Mlp, tau: float) -> None:
    """target <- (1 - tau) * target + tau * main, elementwise and in place."""
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    for l in range(main.n_layers):
        for t, m in ((target.weights[l], main.weights[l]), (target.biases[l], main.biases[l])):
            t *= 1.0 - tau
            t += tau * m
