"""
Two-timescale training and acting loop.

Every controller period the controller picks a RAT for every flow under the
active goal. Every ``meta_period`` controller periods the meta-controller is
rewarded with the mean intrinsic reward of that span (all flows) and picks
the next goal. Both networks take one TD update per period once their
replay holds a full batch.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Protocol

import numpy as np

from ratsteer.models.steering import Goal, SteerAction
from ratsteer.schemas.scenario import Scenario
from ratsteer.utils.seeding import SeedStreams
from ratsteer.core.env import SteeringEnv, extrinsic_reward
from .controllers import Controller, GoalSource, MetaController
from .epsilon import EpsilonSchedule, epsilon_at

logger = logging.getLogger(__name__)

LOG_COLUMNS = ["step", "epsilon", "goal", "lte_actions", "nr_actions", "r_in", "r_ex", "loss"]


@dataclass
class StepLog:
    """One row of training_log.csv"""

    step: int
    epsilon: float
    goal: float
    lte_actions: int
    nr_actions: int
    r_in: float
    r_ex: Optional[float] = None
    loss: Optional[float] = None
    handovers: int = 0
    overrides: int = 0

    def row(self) -> Dict[str, object]:
        data = asdict(self)
        return {column: data[column] for column in LOG_COLUMNS}


class SteeringAgent(Protocol):
    name: str

    def begin_episode(self, env: SteeringEnv) -> None: ...

    def decide_period(self, env: SteeringEnv, learn: bool = True) -> StepLog: ...


class HierarchicalSteeringAgent:
    """Meta-controller (or a static goal) on top of the shared RAT controller"""

    def __init__(
        self,
        goal_source: GoalSource,
        controller: Controller,
        schedule: EpsilonSchedule,
        meta_period: int,
        name: str = "hrl",
    ):
        if meta_period < 1:
            raise ValueError(f"meta_period must be >= 1, got {meta_period}")
        self.goal_source = goal_source
        self.controller = controller
        self.schedule = schedule
        self.meta_period = meta_period
        self.name = name
        self.steps = 0
        self.meta_transitions = 0
        self._goal: Optional[Goal] = None
        self._meta_state: Optional[np.ndarray] = None
        self._span_rewards: List[np.ndarray] = []

    @property
    def goal(self) -> Optional[Goal]:
        return self._goal

    def epsilon(self, learn: bool, offset: int = 0) -> float:
        return epsilon_at(self.steps + offset, self.schedule) if learn else 0.0

    def begin_episode(self, env: SteeringEnv) -> None:
        self._goal = None
        self._meta_state = None
        self._span_rewards = []

    def decide_period(self, env: SteeringEnv, learn: bool = True) -> StepLog:
        epsilon = self.epsilon(learn)
        if self._goal is None:
            self._meta_state = env.observe_meta()
            self._goal, _ = self.goal_source.select_goal(self._meta_state, epsilon)
        goal = self._goal

        inputs = Controller.controller_input(env.observe_all(), goal.threshold)
        actions, _ = self.controller.select_actions(inputs, epsilon)
        outcome = env.step_period(actions, goal.threshold)
        self._span_rewards.append(outcome.rewards)

        r_ex = None
        next_goal = goal
        if len(self._span_rewards) == self.meta_period:
            r_ex = extrinsic_reward(np.concatenate(self._span_rewards))
            next_meta_state = env.observe_meta()
            if learn:
                self.goal_source.store(self._meta_state, goal, r_ex, next_meta_state)
            self.meta_transitions += 1
            self._meta_state = next_meta_state
            next_goal, _ = self.goal_source.select_goal(next_meta_state, self.epsilon(learn, offset=1))
            self._goal = next_goal
            self._span_rewards = []
            logger.debug(f"{self.name}: goal {goal.threshold} -> {next_goal.threshold}, r_ex={r_ex:.4f}")

        loss = None
        if learn:
            next_inputs = Controller.controller_input(env.observe_all(), next_goal.threshold)
            self.controller.store_batch(inputs, actions, outcome.rewards, next_inputs)
            loss = self.controller.learn()
            self.goal_source.learn()
            self.steps += 1

        n_nr = int(np.sum(actions == SteerAction.TO_NR))
        return StepLog(
            step=self.steps if learn else env.period,
            epsilon=epsilon,
            goal=goal.threshold,
            lte_actions=len(actions) - n_nr,
            nr_actions=n_nr,
            r_in=float(np.mean(outcome.rewards)) if len(outcome.rewards) else 0.0,
            r_ex=r_ex,
            loss=loss,
            handovers=int(outcome.handovers.sum()),
            overrides=int(outcome.overridden.sum()),
        )


def build_hrl_agent(scenario: Scenario, seed: Optional[int] = None) -> HierarchicalSteeringAgent:
    """HRL agent with its own RNG streams derived from ``seed``"""
    seed = scenario.seed if seed is None else seed
    streams = SeedStreams(seed)
    steering = scenario.steering
    goals = [Goal(index=i, threshold=th) for i, th in enumerate(steering.goals)]
    total_steps = scenario.experiment.episodes * scenario.experiment.episode_periods
    return HierarchicalSteeringAgent(
        goal_source=MetaController.from_config(goals, scenario.learning, streams),
        controller=Controller.from_config(scenario.learning, streams),
        schedule=EpsilonSchedule.from_config(scenario.epsilon, total_steps),
        meta_period=steering.meta_period,
        name="hrl",
    )
