"""Hierarchical steering agent: meta-controller goals, controller RAT actions"""

from .epsilon import EpsilonSchedule, epsilon_at, epsilon_greedy, epsilon_greedy_batch
from .controllers import Controller, MetaController, StaticGoal, GoalSource
from .hrl import HierarchicalSteeringAgent, SteeringAgent, StepLog, build_hrl_agent

__all__ = [
    "EpsilonSchedule",
    "epsilon_at",
    "epsilon_greedy",
    "epsilon_greedy_batch",
    "Controller",
    "MetaController",
    "StaticGoal",
    "GoalSource",
    "HierarchicalSteeringAgent",
    "SteeringAgent",
    "StepLog",
    "build_hrl_agent",
]
