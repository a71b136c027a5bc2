"""
Flat DQN baseline.

The same controller as the hierarchical agent, driven by a static goal
instead of a learned meta-controller.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ratsteer.models.steering import Goal, SteerAction
from ratsteer.schemas.scenario import LearningConfig, Scenario
from ratsteer.utils.seeding import SeedStreams
from ratsteer.core.agents import Controller, EpsilonSchedule, HierarchicalSteeringAgent, StaticGoal, epsilon_greedy
from ratsteer.core.approximator import ValueNet


@dataclass(frozen=True)
class DqnBaselineConfig:
    threshold: float
    learning: LearningConfig

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"DQN threshold must be in (0, 1], got {self.threshold}")

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "DqnBaselineConfig":
        return cls(threshold=scenario.baselines.dqn_threshold, learning=scenario.learning)


def dqn_decide(
    features: np.ndarray,
    net: ValueNet,
    rng: np.random.Generator,
    epsilon: float,
    threshold: float,
) -> SteerAction:
    """ε-greedy RAT choice for one normalised state under the fixed threshold"""
    q = net.forward(Controller.controller_input(features, threshold))[0]
    index, _ = epsilon_greedy(q, rng, epsilon)
    return SteerAction(index)


def build_dqn_agent(scenario: Scenario, seed: Optional[int] = None) -> HierarchicalSteeringAgent:
    seed = scenario.seed if seed is None else seed
    config = DqnBaselineConfig.from_scenario(scenario)
    streams = SeedStreams(seed)
    total_steps = scenario.experiment.episodes * scenario.experiment.episode_periods
    return HierarchicalSteeringAgent(
        goal_source=StaticGoal(config.threshold),
        controller=Controller.from_config(config.learning, streams),
        schedule=EpsilonSchedule.from_config(scenario.epsilon, total_steps),
        meta_period=scenario.steering.meta_period,
        name="dqn",
    )
