"""Domain types for the multi-RAT simulator"""

from .radio import Rat, BaseStation, UserEquipment, RadioLink
from .traffic import TrafficType, QoSProfile, QOS_PROFILES, TRAFFIC_TYPE_ORDER, TrafficFlow, Packet
from .steering import SteerAction, Goal, RewardWeights, SteeringState

__all__ = [
    "Rat",
    "BaseStation",
    "UserEquipment",
    "RadioLink",
    "TrafficType",
    "QoSProfile",
    "QOS_PROFILES",
    "TRAFFIC_TYPE_ORDER",
    "TrafficFlow",
    "Packet",
    "SteerAction",
    "Goal",
    "RewardWeights",
    "SteeringState",
]
