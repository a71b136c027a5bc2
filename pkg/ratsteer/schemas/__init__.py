"""Pydantic schemas for scenarios and reports"""

from .scenario import (
    AgentKind,
    CellConfig,
    RadioConfig,
    TopologyConfig,
    TrafficConfig,
    LoadSpikeConfig,
    QueueConfig,
    SteeringConfig,
    LearningConfig,
    EpsilonConfig,
    BaselineConfig,
    ExperimentConfig,
    Scenario,
)
from .report import TrafficTypeKpi, FlowFeasibility, KpiReport

__all__ = [
    "AgentKind",
    "CellConfig",
    "RadioConfig",
    "TopologyConfig",
    "TrafficConfig",
    "LoadSpikeConfig",
    "QueueConfig",
    "SteeringConfig",
    "LearningConfig",
    "EpsilonConfig",
    "BaselineConfig",
    "ExperimentConfig",
    "Scenario",
    "TrafficTypeKpi",
    "FlowFeasibility",
    "KpiReport",
]
