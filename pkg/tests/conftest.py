"""Shared fixtures"""

import pytest

from ratsteer.schemas.scenario import (
    ExperimentConfig,
    LearningConfig,
    QueueConfig,
    Scenario,
    SteeringConfig,
    TopologyConfig,
    TrafficConfig,
)


@pytest.fixture
def tiny_scenario():
    """A deployment small enough to train and evaluate in well under a second"""
    return Scenario(
        topology=TopologyConfig(small_cell_count=2, ue_count=6),
        traffic=TrafficConfig(per_ue_load_mbps=2.0),
        queue=QueueConfig(capacity_pkts=50),
        steering=SteeringConfig(decision_ticks=5, meta_period=4),
        learning=LearningConfig(
            hidden_layers=[16, 16],
            learning_rate=1e-2,
            buffer_capacity=500,
            batch_size=8,
            target_sync_updates=20,
        ),
        experiment=ExperimentConfig(
            episodes=1,
            episode_periods=30,
            eval_periods=20,
            seeds=[0, 1],
            loads_mbps=[1.0, 2.0],
            thresholds=[0.5, 1.0],
            trace_periods=10,
        ),
    )
