"""MDP types: state, goal, action and reward weights"""

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .radio import Rat


class SteerAction(int, enum.Enum):
    """Flow admission to a RAT (A_L, A_NR)"""
    TO_LTE = 0
    TO_NR = 1

    @property
    def rat(self) -> Rat:
        return Rat.LTE if self is SteerAction.TO_LTE else Rat.NR

    @classmethod
    def for_rat(cls, rat: Rat) -> "SteerAction":
        return cls.TO_LTE if rat is Rat.LTE else cls.TO_NR


@dataclass(frozen=True)
class Goal:
    """Queue-occupancy threshold handed down by the meta-controller"""

    index: int
    threshold: float

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"Goal threshold must be in (0, 1], got {self.threshold}")


@dataclass(frozen=True)
class RewardWeights:
    """c1, c2 and the handover penalty H"""

    c1: float = 0.5
    c2: float = 0.5
    handover_penalty: float = 0.25

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError(f"Reward weights must be >= 0, got c1={self.c1}, c2={self.c2}")


@dataclass(frozen=True)
class SteeringState:
    """(F_t, SINR_r, Q_l); the same layout serves controller and meta-controller"""

    traffic_mix: Tuple[float, float, float]  # Voice, Video, Gaming
    sinr_db: Tuple[float, float]  # LTE, NR
    occupancy: Tuple[float, float]  # LTE, NR

    def __post_init__(self):
        for q in self.occupancy:
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"Queue occupancy must be in [0, 1], got {q}")
        if not all(np.isfinite(self.sinr_db)):
            raise ValueError(f"SINR must be finite, got {self.sinr_db}")

    def features(self, sinr_min_db: float = -10.0, sinr_max_db: float = 50.0) -> np.ndarray:
        """Min-max normalised feature vector in [0, 1]"""
        span = sinr_max_db - sinr_min_db
        sinr = [min(max((s - sinr_min_db) / span, 0.0), 1.0) for s in self.sinr_db]
        return np.array([*self.traffic_mix, *sinr, *self.occupancy], dtype=float)


STATE_SIZE = 7
