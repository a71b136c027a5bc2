"""
Goal sources (learned meta-controller, static threshold) and the RAT controller.

The controller is shared by every flow; its input is the 7-feature state
with the active threshold appended.
"""

import logging
from typing import Optional, Protocol, Sequence, Tuple

import numpy as np

from ratsteer.models.steering import STATE_SIZE, Goal, SteerAction
from ratsteer.schemas.scenario import LearningConfig
from ratsteer.utils.seeding import SeedStreams
from ratsteer.core.approximator import ReplayBuffer, ValueNet
from .epsilon import epsilon_greedy, epsilon_greedy_batch

logger = logging.getLogger(__name__)

CONTROLLER_INPUT_SIZE = STATE_SIZE + 1


def _build_net(
    learning: LearningConfig,
    input_size: int,
    output_size: int,
    streams: SeedStreams,
    prefix: str,
) -> Tuple[ValueNet, ReplayBuffer]:
    net = ValueNet(
        input_size=input_size,
        output_size=output_size,
        hidden_layers=learning.hidden_layers,
        learning_rate=learning.learning_rate,
        discount=learning.discount,
        target_sync_updates=learning.target_sync_updates,
        rng=streams.generator(f"{prefix}_init"),
    )
    replay = ReplayBuffer(
        capacity=learning.buffer_capacity,
        state_size=input_size,
        batch_size=learning.batch_size,
        rng=streams.generator(f"{prefix}_replay"),
    )
    return net, replay


class GoalSource(Protocol):
    learns: bool

    def select_goal(self, meta_state: np.ndarray, epsilon: float) -> Tuple[Goal, bool]: ...

    def store(self, meta_state: np.ndarray, goal: Goal, reward: float, next_meta_state: np.ndarray) -> None: ...

    def learn(self) -> Optional[float]: ...


class MetaController:
    """Picks a queue threshold from the goal set every meta period"""

    learns = True

    def __init__(self, goals: Sequence[Goal], net: ValueNet, replay: ReplayBuffer, rng: np.random.Generator):
        if net.output_size != len(goals):
            raise ValueError(f"Meta network has {net.output_size} outputs for {len(goals)} goals")
        self.goals = list(goals)
        self.net = net
        self.replay = replay
        self.rng = rng
        self.transitions = 0

    @classmethod
    def from_config(cls, goals: Sequence[Goal], learning: LearningConfig, streams: SeedStreams) -> "MetaController":
        net, replay = _build_net(learning, STATE_SIZE, len(goals), streams, "meta")
        return cls(goals, net, replay, streams.generator("meta"))

    def select_goal(self, meta_state: np.ndarray, epsilon: float) -> Tuple[Goal, bool]:
        index, explored = epsilon_greedy(self.net.forward(meta_state), self.rng, epsilon)
        return self.goals[index], explored

    def store(self, meta_state: np.ndarray, goal: Goal, reward: float, next_meta_state: np.ndarray) -> None:
        self.replay.add(meta_state, goal.index, reward, next_meta_state)
        self.transitions += 1

    def learn(self) -> Optional[float]:
        if not self.replay.ready:
            return None
        return self.net.td_update(self.replay.sample())


class StaticGoal:
    """A fixed threshold behind the meta-controller interface; never learns, draws no randomness"""

    learns = False

    def __init__(self, threshold: float):
        self.goal = Goal(index=0, threshold=threshold)
        self.goals = [self.goal]
        self.transitions = 0

    def select_goal(self, meta_state: np.ndarray, epsilon: float) -> Tuple[Goal, bool]:
        return self.goal, False

    def store(self, meta_state: np.ndarray, goal: Goal, reward: float, next_meta_state: np.ndarray) -> None:
        pass

    def learn(self) -> Optional[float]:
        return None


class Controller:
    """Chooses LTE or NR for every flow under the active goal"""

    def __init__(self, net: ValueNet, replay: ReplayBuffer, rng: np.random.Generator):
        if net.input_size != CONTROLLER_INPUT_SIZE or net.output_size != len(SteerAction):
            raise ValueError(
                f"Controller network must map {CONTROLLER_INPUT_SIZE} inputs to {len(SteerAction)} outputs, "
                f"got {net.input_size} -> {net.output_size}"
            )
        self.net = net
        self.replay = replay
        self.rng = rng

    @classmethod
    def from_config(cls, learning: LearningConfig, streams: SeedStreams) -> "Controller":
        net, replay = _build_net(learning, CONTROLLER_INPUT_SIZE, len(SteerAction), streams, "controller")
        return cls(net, replay, streams.generator("controller"))

    @staticmethod
    def controller_input(features: np.ndarray, threshold: float) -> np.ndarray:
        """s ⊕ g: append the threshold to every state row"""
        features = np.atleast_2d(features)
        return np.hstack([features, np.full((len(features), 1), threshold)])

    def select_action(self, features: np.ndarray, goal: Goal, epsilon: float) -> Tuple[SteerAction, bool]:
        q = self.net.forward(self.controller_input(features, goal.threshold))[0]
        index, explored = epsilon_greedy(q, self.rng, epsilon)
        return SteerAction(index), explored

    def select_actions(self, inputs: np.ndarray, epsilon: float) -> Tuple[np.ndarray, np.ndarray]:
        """Batched selection over controller inputs (state ⊕ goal rows)"""
        return epsilon_greedy_batch(self.net.forward(inputs), self.rng, epsilon)

    def store_batch(self, inputs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, next_inputs: np.ndarray) -> None:
        self.replay.add_batch(inputs, actions, rewards, next_inputs)

    def learn(self) -> Optional[float]:
        if not self.replay.ready:
            return None
        return self.net.td_update(self.replay.sample())
