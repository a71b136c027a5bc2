"""Unit tests for ε-greedy selection, the controllers and the two-timescale loop"""

import math

import numpy as np
import pytest

from ratsteer.models.steering import Goal, SteerAction
from ratsteer.schemas.scenario import EpsilonConfig
from ratsteer.utils.seeding import SeedStreams
from ratsteer.core.agents import (
    Controller,
    EpsilonSchedule,
    MetaController,
    StaticGoal,
    build_hrl_agent,
    epsilon_at,
    epsilon_greedy,
    epsilon_greedy_batch,
)
from ratsteer.core.approximator import ReplayBuffer, ValueNet
from ratsteer.core.env import SteeringEnv
from ratsteer.core.netsim import NetworkWorld


def _run(agent, scenario, periods, seed=0, learn=True):
    env = SteeringEnv(NetworkWorld(scenario, seed=seed))
    agent.begin_episode(env)
    return env, [agent.decide_period(env, learn=learn) for _ in range(periods)]


@pytest.mark.unit
class TestEpsilonSchedule:
    """Linear decay"""

    def test_linear_decay(self):
        """Epsilon falls linearly from start to end over the decay steps"""
        schedule = EpsilonSchedule(start=1.0, end=0.05, decay_steps=100)
        assert epsilon_at(0, schedule) == pytest.approx(1.0)
        assert epsilon_at(50, schedule) == pytest.approx(0.525)
        assert epsilon_at(100, schedule) == pytest.approx(0.05)
        assert epsilon_at(10_000, schedule) == pytest.approx(0.05)

    def test_no_decay_steps(self):
        """Zero decay steps pins epsilon at its end value"""
        assert epsilon_at(0, EpsilonSchedule(start=1.0, end=0.1, decay_steps=0)) == pytest.approx(0.1)

    def test_negative_step(self):
        """A negative step raises ValueError"""
        with pytest.raises(ValueError):
            epsilon_at(-1, EpsilonSchedule())

    def test_out_of_range_epsilon(self):
        """Epsilon bounds outside [0, 1] are rejected"""
        with pytest.raises(ValueError):
            EpsilonSchedule(start=1.5)

    def test_from_config(self):
        """Schedule is built from the epsilon config and the step count"""
        schedule = EpsilonSchedule.from_config(EpsilonConfig(start=0.9, end=0.1, decay_fraction=0.5), total_steps=30)
        assert schedule.decay_steps == 15
        assert schedule.start == 0.9


@pytest.mark.unit
class TestEpsilonGreedy:
    def test_greedy_ties_go_to_lowest_index(self):
        """Equal Q-values pick the lowest action index"""
        rng = np.random.default_rng(0)
        assert epsilon_greedy(np.array([1.0, 1.0, 0.5]), rng, 0.0) == (0, False)
        assert epsilon_greedy(np.array([0.0, 2.0, 2.0]), rng, 0.0) == (1, False)

    def test_full_exploration(self):
        """Epsilon 1 explores on every draw"""
        rng = np.random.default_rng(0)
        assert all(epsilon_greedy(np.array([0.0, 1.0]), rng, 1.0)[1] for _ in range(100))

    @pytest.mark.parametrize("epsilon", [0.1, 0.5])
    def test_exploration_rate(self, epsilon):
        """Non-greedy frequency stays within 3 sigma of epsilon"""
        rng = np.random.default_rng(5)
        draws = 10_000
        explored = sum(epsilon_greedy(np.array([0.0, 1.0]), rng, epsilon)[1] for _ in range(draws))
        assert abs(explored - draws * epsilon) <= 3 * math.sqrt(draws * epsilon * (1 - epsilon))

    def test_batch_greedy(self):
        """Batched selection matches row-by-row argmax"""
        q = np.array([[0.0, 1.0], [2.0, 1.0], [3.0, 3.0]])
        actions, explore = epsilon_greedy_batch(q, np.random.default_rng(0), 0.0)
        assert actions.tolist() == [1, 0, 0]
        assert not explore.any()


@pytest.mark.unit
class TestControllers:
    """Network shapes and goal sources"""

    def test_controller_input_appends_threshold(self):
        """The goal threshold is appended as the last input column"""
        inputs = Controller.controller_input(np.zeros((3, 7)), 0.8)
        assert inputs.shape == (3, 8)
        np.testing.assert_array_equal(inputs[:, 7], [0.8, 0.8, 0.8])

    def test_controller_rejects_wrong_net(self):
        """A net of the wrong input size is rejected"""
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            Controller(ValueNet(7, 2), ReplayBuffer(10, 7, 2, rng), rng)

    def test_meta_controller_output_per_goal(self, tiny_scenario):
        """The meta-controller scores every goal in the set"""
        goals = [Goal(index=0, threshold=0.5), Goal(index=1, threshold=1.0)]
        meta = MetaController.from_config(goals, tiny_scenario.learning, SeedStreams(0))
        assert meta.net.output_size == 2
        goal, _ = meta.select_goal(np.zeros(7), 0.0)
        assert goal in goals

        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            MetaController(goals, ValueNet(7, 3), ReplayBuffer(10, 7, 2, rng), rng)

    def test_select_action_returns_steer_action(self, tiny_scenario):
        """Controller actions are SteerAction members"""
        controller = Controller.from_config(tiny_scenario.learning, SeedStreams(0))
        action, explored = controller.select_action(np.zeros(7), Goal(index=0, threshold=0.5), 0.0)
        assert isinstance(action, SteerAction)
        assert not explored

    def test_static_goal(self):
        """StaticGoal always returns its one threshold"""
        source = StaticGoal(0.7)
        goal, explored = source.select_goal(np.zeros(7), 1.0)
        assert goal.threshold == 0.7
        assert not explored
        source.store(np.zeros(7), goal, 1.0, np.zeros(7))
        assert source.learn() is None


@pytest.mark.unit
class TestHierarchicalLoop:
    """Goal persistence, extrinsic reward and learning cadence"""

    def test_meta_transition_count(self, tiny_scenario):
        """One meta transition is stored per meta period"""
        agent = build_hrl_agent(tiny_scenario, seed=0)
        _run(agent, tiny_scenario, periods=10)
        assert agent.meta_transitions == 10 // tiny_scenario.steering.meta_period
        assert agent.goal_source.transitions == 2
        assert agent.steps == 10

    def test_goal_constant_between_boundaries(self, tiny_scenario):
        """The active goal changes only on meta boundaries"""
        agent = build_hrl_agent(tiny_scenario, seed=1)
        _, logs = _run(agent, tiny_scenario, periods=12)
        period = tiny_scenario.steering.meta_period
        for start in range(0, 12, period):
            assert len({log.goal for log in logs[start : start + period]}) == 1

    def test_extrinsic_reward_is_span_mean(self, tiny_scenario):
        """r_ex is the mean intrinsic reward over the meta span"""
        agent = build_hrl_agent(tiny_scenario, seed=2)
        _, logs = _run(agent, tiny_scenario, periods=8)
        period = tiny_scenario.steering.meta_period
        for end in (period, 2 * period):
            span = logs[end - period : end]
            assert all(log.r_ex is None for log in span[:-1])
            assert span[-1].r_ex == pytest.approx(np.mean([log.r_in for log in span]))

    def test_controller_stores_every_flow(self, tiny_scenario):
        """Each period stores one controller transition per flow"""
        agent = build_hrl_agent(tiny_scenario, seed=0)
        env, _ = _run(agent, tiny_scenario, periods=5)
        assert agent.controller.replay.added == 5 * env.n_flows

    def test_no_learning_in_evaluation(self, tiny_scenario):
        """learn=False leaves weights and buffers untouched"""
        agent = build_hrl_agent(tiny_scenario, seed=0)
        before = [w.copy() for w in agent.controller.net.weights]
        env, logs = _run(agent, tiny_scenario, periods=8, learn=False)
        assert agent.steps == 0
        assert len(agent.controller.replay) == 0
        assert agent.goal_source.transitions == 0
        assert all(log.epsilon == 0.0 and log.loss is None for log in logs)
        assert [log.step for log in logs] == list(range(1, 9))
        for a, b in zip(before, agent.controller.net.weights):
            np.testing.assert_array_equal(a, b)

    def test_losses_appear_once_replay_is_ready(self, tiny_scenario):
        """Loss is logged only after the buffer holds a batch"""
        agent = build_hrl_agent(tiny_scenario, seed=0)
        _, logs = _run(agent, tiny_scenario, periods=3)
        # 6 flows per period, batch of 8
        assert logs[0].loss is None
        assert logs[1].loss is not None

    def test_same_seed_same_logs(self, tiny_scenario):
        """Identical seeds give identical training logs"""
        _, first = _run(build_hrl_agent(tiny_scenario, seed=4), tiny_scenario, periods=10, seed=4)
        _, second = _run(build_hrl_agent(tiny_scenario, seed=4), tiny_scenario, periods=10, seed=4)
        assert [log.row() for log in first] == [log.row() for log in second]

    def test_stored_inputs_carry_active_goal(self, tiny_scenario):
        """Stored controller inputs end with the active threshold"""
        agent = build_hrl_agent(tiny_scenario, seed=3)
        env, logs = _run(agent, tiny_scenario, periods=8)
        states = agent.controller.replay.states
        for period, log in enumerate(logs):
            rows = states[period * env.n_flows : (period + 1) * env.n_flows, 7]
            np.testing.assert_array_equal(rows, np.full(env.n_flows, log.goal))

    def test_full_exploration_keeps_conservation(self, tiny_scenario):
        """Random steering never breaks packet conservation"""
        scenario = tiny_scenario.model_copy(update={"epsilon": EpsilonConfig(start=1.0, end=1.0)})
        agent = build_hrl_agent(scenario, seed=0)
        env = SteeringEnv(NetworkWorld(scenario.with_load(10.0), seed=0, strict=True))
        agent.begin_episode(env)
        for _ in range(200):
            agent.decide_period(env)
        counters = env.world.counters
        assert env.world.now == 200 * scenario.steering.decision_ticks
        assert counters.generated_pkts == counters.delivered_pkts + counters.dropped_pkts + env.world.queued_pkts
