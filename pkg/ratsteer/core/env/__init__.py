"""MDP surface: observation, action application, intrinsic and extrinsic rewards"""

from .rewards import (
    EmptyHistoryError,
    delay_param,
    throughput_param,
    intrinsic_reward,
    extrinsic_reward,
)
from .steering_env import (
    SteeringEnv,
    FlowLedger,
    PeriodOutcome,
    observe,
    resolve_rat,
    apply_action,
    objective_value,
)

__all__ = [
    "EmptyHistoryError",
    "delay_param",
    "throughput_param",
    "intrinsic_reward",
    "extrinsic_reward",
    "SteeringEnv",
    "FlowLedger",
    "PeriodOutcome",
    "observe",
    "resolve_rat",
    "apply_action",
    "objective_value",
]
