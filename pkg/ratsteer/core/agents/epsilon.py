"""ε-greedy selection and its linear decay schedule"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ratsteer.schemas.scenario import EpsilonConfig


@dataclass(frozen=True)
class EpsilonSchedule:
    """Linear decay from ``start`` to ``end`` over ``decay_steps``, constant afterwards"""

    start: float = 1.0
    end: float = 0.05
    decay_steps: int = 1

    def __post_init__(self):
        for value in (self.start, self.end):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"ε must be in [0, 1], got {value}")
        if self.decay_steps < 0:
            raise ValueError(f"decay_steps must be >= 0, got {self.decay_steps}")

    @classmethod
    def from_config(cls, config: EpsilonConfig, total_steps: int) -> "EpsilonSchedule":
        return cls(start=config.start, end=config.end, decay_steps=int(round(config.decay_fraction * total_steps)))


def epsilon_at(step: int, schedule: EpsilonSchedule) -> float:
    if step < 0:
        raise ValueError(f"step must be >= 0, got {step}")
    if schedule.decay_steps == 0 or step >= schedule.decay_steps:
        return schedule.end
    return schedule.start + (schedule.end - schedule.start) * (step / schedule.decay_steps)


def epsilon_greedy(values: np.ndarray, rng: np.random.Generator, epsilon: float) -> Tuple[int, bool]:
    """
    Explore with probability ε (uniform index), else argmax.

    Ties go to the lowest index. ε = 0 never explores.

    Returns:
        (chosen index, whether it was an exploration draw)
    """
    values = np.asarray(values, dtype=float)
    if rng.random() < epsilon:
        return int(rng.integers(len(values))), True
    return int(np.argmax(values)), False


def epsilon_greedy_batch(q: np.ndarray, rng: np.random.Generator, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
    """Row-wise ``epsilon_greedy`` over a (batch, choices) matrix"""
    q = np.atleast_2d(q)
    n, k = q.shape
    explore = rng.random(n) < epsilon
    random_choice = rng.integers(k, size=n)
    return np.where(explore, random_choice, np.argmax(q, axis=1)), explore
