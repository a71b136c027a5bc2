"""Traffic classes, QoS targets, flows and packets"""

import enum
from dataclasses import dataclass
from typing import Dict, Optional

from .radio import Rat


class TrafficType(str, enum.Enum):
    """Service classes carried by the flows"""
    VOICE = "voice"
    VIDEO = "video"
    GAMING = "gaming"


# One-hot layout of F_t
TRAFFIC_TYPE_ORDER = (TrafficType.VOICE, TrafficType.VIDEO, TrafficType.GAMING)


@dataclass(frozen=True)
class QoSProfile:
    """Packet size and QoS targets of a traffic class"""

    traffic_type: TrafficType
    packet_size: int  # bytes
    t_qos_mbps: float  # minimum throughput
    d_qos_ms: float  # delay budget

    @property
    def packet_bits(self) -> int:
        return self.packet_size * 8


QOS_PROFILES: Dict[TrafficType, QoSProfile] = {
    TrafficType.VOICE: QoSProfile(TrafficType.VOICE, packet_size=30, t_qos_mbps=0.1, d_qos_ms=100.0),
    TrafficType.VIDEO: QoSProfile(TrafficType.VIDEO, packet_size=250, t_qos_mbps=10.0, d_qos_ms=80.0),
    TrafficType.GAMING: QoSProfile(TrafficType.GAMING, packet_size=120, t_qos_mbps=5.0, d_qos_ms=40.0),
}


@dataclass
class TrafficFlow:
    """The single flow of a UE. The whole flow is steered, never split."""

    flow_id: int
    ue_id: int
    profile: QoSProfile
    offered_load_mbps: float
    current_rat: Rat = Rat.NR
    bound_bs_id: Optional[int] = None

    def __post_init__(self):
        if self.offered_load_mbps < 0:
            raise ValueError(f"Flow {self.flow_id}: offered load must be >= 0, got {self.offered_load_mbps}")

    @property
    def traffic_type(self) -> TrafficType:
        return self.profile.traffic_type

    @property
    def demand_bps(self) -> float:
        """δ_φ"""
        return self.offered_load_mbps * 1e6

    def binding(self, ue_id: int, bs_id: int) -> int:
        """v_{u,b}^φ: 1 when this flow currently uses link (ue_id, bs_id)"""
        return int(self.ue_id == ue_id and self.bound_bs_id == bs_id)


@dataclass(slots=True)
class Packet:
    """A packet tagged with its flow; times are step indices"""

    flow_id: int
    ue_id: int
    traffic_type: TrafficType
    size: int  # bytes
    arrival_time: int
    service_start: Optional[int] = None
    depart_time: Optional[int] = None
    sent_bits: float = 0.0

    @property
    def bits(self) -> int:
        return self.size * 8

    @property
    def delivered(self) -> bool:
        return self.depart_time is not None
