"""
Directional comparisons between the three schemes on reduced settings.

Run with ``pytest -m slow tests/test_acceptance.py``. Worker count follows
RAT_STEER_JOBS (all cores by default).
"""

import pandas as pd
import pytest

from ratsteer.config import Settings
from ratsteer.schemas.scenario import AgentKind, ExperimentConfig, Scenario, TopologyConfig
from ratsteer.core.harness import ExperimentRunner

HIGH_LOAD = 10.0
LOW_LOAD = 5.0
INTERIOR_THRESHOLDS = [0.5, 0.6, 0.7, 0.8, 0.9]


@pytest.fixture(scope="module")
def reduced_scenario():
    return Scenario(
        topology=TopologyConfig(ue_count=30, small_cell_count=2),
        experiment=ExperimentConfig(
            episodes=1,
            episode_periods=2000,
            eval_periods=500,
            seeds=[0, 1, 2],
            loads_mbps=[LOW_LOAD, HIGH_LOAD],
            thresholds=[*INTERIOR_THRESHOLDS, 1.0],
        ),
    )


@pytest.fixture(scope="module")
def runner(reduced_scenario):
    return ExperimentRunner(reduced_scenario, jobs=Settings().effective_jobs)


@pytest.fixture(scope="module")
def agent_means(runner) -> pd.DataFrame:
    df = runner.load_sweep(loads=[HIGH_LOAD], agents=[AgentKind.HRL, AgentKind.DQN, AgentKind.HEURISTIC])
    return df.groupby("agent")[["throughput_mbps", "delay_ms", "drop_rate"]].mean()


@pytest.fixture(scope="module")
def sweep(runner) -> pd.DataFrame:
    return runner.threshold_sweep()


@pytest.mark.slow
class TestSchemeOrdering:
    """HRL ahead of the DQN baseline ahead of the heuristic at high load"""

    def test_throughput_order(self, agent_means):
        """Mean system throughput: HRL > DQN > heuristic"""
        t = agent_means["throughput_mbps"]
        assert t["hrl"] > t["dqn"] > t["heuristic"]

    def test_delay_order(self, agent_means):
        """Mean network delay: HRL < DQN < heuristic"""
        d = agent_means["delay_ms"]
        assert d["hrl"] < d["dqn"] < d["heuristic"]

    def test_hrl_drops_least(self, agent_means):
        """HRL has the lowest drop rate of the three"""
        drops = agent_means["drop_rate"]
        assert drops["hrl"] < drops["dqn"]
        assert drops["hrl"] < drops["heuristic"]


@pytest.mark.slow
class TestThresholdSweepShape:
    """DQN throughput against the fixed threshold"""

    @pytest.mark.parametrize("load", [LOW_LOAD, HIGH_LOAD])
    def test_threshold_one_is_not_best(self, sweep, load):
        """Th = 1.0 falls short of the best interior threshold"""
        rows = sweep[sweep["load"] == load].set_index("threshold")["throughput_mbps"]
        assert rows[1.0] < rows[INTERIOR_THRESHOLDS].max()

    def test_best_threshold_drops_with_load(self, sweep):
        """The best threshold at high load is no larger than at low load"""
        best = {
            load: sweep[sweep["load"] == load].set_index("threshold")["throughput_mbps"].idxmax()
            for load in (LOW_LOAD, HIGH_LOAD)
        }
        assert best[HIGH_LOAD] <= best[LOW_LOAD]
