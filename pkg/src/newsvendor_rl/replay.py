"""Fixed-capacity transition memory with uniform random sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Transition", "ReplayBuffer"]


@dataclass(frozen=True)
class Transition:
    state: int  # day index 0..6
    action: float
    reward: float  # post-transform reward, as stored for learning
    next_state: int
    done: bool

    def __post_init__(self) -> None:
        if not 0 <= self.state <= 6 or not 0 <= self.next_state <= 6:
            raise ValueError(f"day indices must be in 0..6, got {self.state}, {self.next_state}")


class ReplayBuffer:
    """Circular store of the most recent ``capacity`` transitions.

    Single-writer, single-reader; sampling is uniform with replacement.
    """

    def __init__(self, capacity: int = 100_000) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._storage: list[Transition] = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._storage)

    def push(self, t: Transition) -> None:
        """Append t, evicting the oldest transition once full."""
        if len(self._storage) < self.capacity:
            self._storage.append(t)
        else:
            self._storage[self._cursor] = t
            self._cursor = (self._cursor + 1) % self.capacity

    def sample_batch(self, n: int, rng: np.random.Generator) -> list[Transition]:
        """n independent uniform draws (with replacement) from the contents."""
        if not self._storage:
            raise RuntimeError("cannot sample from an empty replay buffer")
        if n < 1:
            raise ValueError(f"batch size must be >= 1, got {n}")
        idx = rng.integers(0, len(self._storage), size=n)
        storage = self._storage
        return [storage[i] for i in idx]

    def contents(self) -> list[Transition]:
        """Current transitions oldest-first (mainly for tests and debugging)."""
        return self._storage[self._cursor :] + self._storage[: self._cursor]
