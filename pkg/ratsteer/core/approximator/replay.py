"""Experience replay ring buffer"""

from typing import NamedTuple, Optional

import numpy as np


class TransitionBatch(NamedTuple):
    """(s, a, r, s′, terminal) arrays with a leading batch axis"""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray

    @classmethod
    def single(cls, state, action: int, reward: float, next_state, terminal: bool = False) -> "TransitionBatch":
        return cls(
            states=np.atleast_2d(np.asarray(state, dtype=float)),
            actions=np.array([action], dtype=int),
            rewards=np.array([reward], dtype=float),
            next_states=np.atleast_2d(np.asarray(next_state, dtype=float)),
            terminals=np.array([terminal], dtype=bool),
        )

    def __len__(self) -> int:
        return len(self.actions)


class ReplayBuffer:
    """Fixed-capacity transition memory; the oldest entries are overwritten first.

    Sampling is uniform and without replacement inside one batch.
    """

    def __init__(self, capacity: int, state_size: int, batch_size: int, rng: np.random.Generator):
        if capacity < 1:
            raise ValueError(f"Replay capacity must be >= 1, got {capacity}")
        if not 1 <= batch_size <= capacity:
            raise ValueError(f"Batch size must be in [1, {capacity}], got {batch_size}")
        self.capacity = capacity
        self.batch_size = batch_size
        self.rng = rng
        self.states = np.zeros((capacity, state_size))
        self.actions = np.zeros(capacity, dtype=int)
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_size))
        self.terminals = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0
        self.added = 0

    def __len__(self) -> int:
        return self._size

    @property
    def ready(self) -> bool:
        return self._size >= self.batch_size

    def add(self, state, action: int, reward: float, next_state, terminal: bool = False) -> None:
        self.add_batch(
            np.atleast_2d(state), np.array([action]), np.array([reward]), np.atleast_2d(next_state), np.array([terminal])
        )

    def add_batch(
        self,
        states: np.ndarray,
        actions: np.ndarray,
        rewards: np.ndarray,
        next_states: np.ndarray,
        terminals: Optional[np.ndarray] = None,
    ) -> None:
        n = len(actions)
        if terminals is None:
            terminals = np.zeros(n, dtype=bool)
        slots = (self._next + np.arange(n)) % self.capacity
        # With n > capacity later rows win, as if added one by one
        self.states[slots] = states
        self.actions[slots] = actions
        self.rewards[slots] = rewards
        self.next_states[slots] = next_states
        self.terminals[slots] = terminals
        self._next = int((self._next + n) % self.capacity)
        self._size = min(self._size + n, self.capacity)
        self.added += n

    def sample(self, batch_size: Optional[int] = None) -> TransitionBatch:
        batch_size = self.batch_size if batch_size is None else batch_size
        if not 1 <= batch_size <= self._size:
            raise ValueError(f"Cannot sample {batch_size} transitions from a buffer holding {self._size}")
        idx = self.rng.choice(self._size, size=batch_size, replace=False)
        return TransitionBatch(
            states=self.states[idx].copy(),
            actions=self.actions[idx].copy(),
            rewards=self.rewards[idx].copy(),
            next_states=self.next_states[idx].copy(),
            terminals=self.terminals[idx].copy(),
        )
