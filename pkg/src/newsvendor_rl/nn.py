"""Minimal dense network with exact reverse-mode gradients and Adam.

Everything is float64 numpy. Hidden layers are rectified linear; the output
head is linear or tanh. ``backward`` returns gradients for the parameters
and for the network input, which the policy update needs to push gradients
from a critic's action input back into the actor.

Inputs may be a single vector or a batch (one row per sample); gradients of
a batch are summed over rows, matching a sum-of-per-sample-losses convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

__all__ = ["Mlp", "MlpGrads", "AdamState", "forward", "backward", "adam_step"]

OutputActivation = Literal["linear", "tanh"]


@dataclass
class Mlp:
    """Fully connected network; weight l maps layer l to layer l+1."""

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]  # shapes (layer_sizes[l+1], layer_sizes[l])
    biases: list[np.ndarray]  # shapes (layer_sizes[l+1],)
    output_activation: OutputActivation = "linear"

    @classmethod
    def init(
        cls,
        layer_sizes: Sequence[int],
        output_activation: OutputActivation,
        rng: np.random.Generator,
    ) -> "Mlp":
        """Weights uniform in +-1/sqrt(fan_in), biases zero."""
        sizes = tuple(int(n) for n in layer_sizes)
        if len(sizes) < 2:
            raise ValueError(f"need at least input and output layers, got {sizes}")
        if any(n < 1 for n in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        if output_activation not in ("linear", "tanh"):
            raise ValueError(f"unknown output activation: {output_activation!r}")
        weights = []
        biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))
        return cls(sizes, weights, biases, output_activation)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "Mlp":
        return Mlp(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.output_activation,
        )


@dataclass
class MlpGrads:
    """Parameter gradients, shaped exactly like the network they came from."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


@dataclass
class ForwardCache:
    """Post-activation values per layer (index 0 is the input batch)."""

    activations: list[np.ndarray]
    squeeze: bool  # original input was a single vector


def forward(net: Mlp, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Evaluate the network; returns the output and a cache for backward."""
    x = np.asarray(x, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.layer_sizes[0]:
        raise ValueError(
            f"input has shape {x.shape}, expected (*, {net.layer_sizes[0]})"
        )
    activations = [x]
    h = x
    last = net.n_layers - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ w.T + b
        if l < last:
            h = np.maximum(z, 0.0)
        elif net.output_activation == "tanh":
            h = np.tanh(z)
        else:
            h = z
        activations.append(h)
    out = h[0] if squeeze else h
    return out, ForwardCache(activations, squeeze)


def backward(
    net: Mlp, cache: ForwardCache, output_gradient: np.ndarray
) -> tuple[MlpGrads, np.ndarray]:
    """Exact gradients of sum(output * output_gradient) w.r.t. params and input."""
    g = np.asarray(output_gradient, dtype=np.float64)
    if cache.squeeze:
        g = g[None, :]
    out = cache.activations[-1]
    if g.shape != out.shape:
        raise ValueError(f"output gradient has shape {g.shape}, expected {out.shape}")
    grads_w: list[np.ndarray] = [np.empty(0)] * net.n_layers
    grads_b: list[np.ndarray] = [np.empty(0)] * net.n_layers
    last = net.n_layers - 1
    for l in range(last, -1, -1):
        h = cache.activations[l + 1]
        if l == last:
            gz = g * (1.0 - h * h) if net.output_activation == "tanh" else g
        else:
            gz = g * (h > 0.0)
        grads_w[l] = gz.T @ cache.activations[l]
        grads_b[l] = gz.sum(axis=0)
        g = gz @ net.weights[l]
    input_grad = g[0] if cache.squeeze else g
    return MlpGrads(grads_w, grads_b), input_grad


@dataclass
class AdamState:
    """First/second moment accumulators plus the shared update counter."""

    m_weights: list[np.ndarray]
    v_weights: list[np.ndarray]
    m_biases: list[np.ndarray]
    v_biases: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_net(cls, net: Mlp, **kwargs) -> "AdamState":
        return cls(
            m_weights=[np.zeros_like(w) for w in net.weights],
            v_weights=[np.zeros_like(w) for w in net.weights],
            m_biases=[np.zeros_like(b) for b in net.biases],
            v_biases=[np.zeros_like(b) for b in net.biases],
            **kwargs,
        )


def adam_step(net: Mlp, grads: MlpGrads, state: AdamState, lr: float) -> None:
    """One bias-corrected Adam update, in place on net and state.

    Raises FloatingPointError if any gradient entry is not finite.
    """
    for g in grads.weights + grads.biases:
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite gradient passed to adam_step")
    state.t += 1
    c1 = 1.0 - state.beta1**state.t
    c2 = 1.0 - state.beta2**state.t
    for l in range(net.n_layers):
        for param, grad, m, v in (
            (net.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l]),
            (net.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l]),
        ):
            m *= state.beta1
            m += (1.0 - state.beta1) * grad
            v *= state.beta2
            v += (1.0 - state.beta2) * np.square(grad)
            param -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)


def save_mlp(net: Mlp, path) -> None:
    """Write a bit-exact checkpoint (npz, format version 1)."""
    arrays = {"version": np.array(1), "layer_sizes": np.array(net.layer_sizes)}
    arrays["output_activation"] = np.array(net.output_activation)
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        arrays[f"w{l}"] = w
        arrays[f"b{l}"] = b
    np.savez(path, **arrays)


def load_mlp(path) -> Mlp:
    """Inverse of :func:`save_mlp`."""
    with np.load(path) as data:
        if int(data["version"]) != 1:
            raise ValueError(f"unsupported checkpoint version {data['version']}")
        sizes = tuple(int(n) for n in data["layer_sizes"])
        act = str(data["output_activation"])
        n = len(sizes) - 1
        weights = [data[f"w{l}"].copy() for l in range(n)]
        biases = [data[f"b{l}"].copy() for l in range(n)]
    return Mlp(sizes, weights, biases, act)  # type: ignore[arg-type]
