"""Comparison schemes: static-threshold DQN and the weighted-sum heuristic"""

from .dqn import DqnBaselineConfig, dqn_decide, build_dqn_agent
from .heuristic import (
    HeuristicWeights,
    HeuristicAgent,
    heuristic_decide,
    heuristic_metrics,
    heuristic_steer,
    saturation_action,
    service_metric,
)

__all__ = [
    "DqnBaselineConfig",
    "dqn_decide",
    "build_dqn_agent",
    "HeuristicWeights",
    "HeuristicAgent",
    "heuristic_decide",
    "heuristic_metrics",
    "heuristic_steer",
    "saturation_action",
    "service_metric",
]
