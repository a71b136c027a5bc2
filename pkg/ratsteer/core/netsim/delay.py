"""Delay decomposition D = D_T + D_Q"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ratsteer.models.traffic import Packet


class PacketQueryError(Exception):
    """Raised when delay is asked of a packet that was never delivered"""

    pass


@dataclass(frozen=True)
class DelayRecord:
    """Transmission and queuing delay in ms"""

    transmission_ms: float
    queuing_ms: float

    def __post_init__(self):
        if self.transmission_ms < 0 or self.queuing_ms < 0:
            raise ValueError(f"Delay components must be >= 0, got {self}")

    @property
    def total_ms(self) -> float:
        return self.transmission_ms + self.queuing_ms


def delay_of(pkt: Packet, capacity_at_service: float, tick_ms: float = 1.0) -> DelayRecord:
    """
    Delay of a delivered packet.

    D_Q counts whole steps between arrival and the first transmitted bit;
    D_T = size·8 / capacity at service.
    """
    if not pkt.delivered or pkt.service_start is None:
        raise PacketQueryError(f"Packet of flow {pkt.flow_id} arrived at {pkt.arrival_time} was not delivered")
    if capacity_at_service <= 0:
        raise ValueError(f"capacity at service must be > 0 bits/s, got {capacity_at_service}")

    queuing_ms = (pkt.service_start - pkt.arrival_time) * tick_ms
    transmission_ms = pkt.bits / capacity_at_service * 1000.0
    return DelayRecord(transmission_ms=transmission_ms, queuing_ms=queuing_ms)


def delays_ms(packets: Sequence[Packet], capacity_at_service: float, tick_ms: float = 1.0) -> np.ndarray:
    """Total delay (ms) of packets delivered in one step at one capacity; same rule as ``delay_of``"""
    if capacity_at_service <= 0:
        raise ValueError(f"capacity at service must be > 0 bits/s, got {capacity_at_service}")
    if any(not pkt.delivered or pkt.service_start is None for pkt in packets):
        raise PacketQueryError("delays_ms called with an undelivered packet")
    waited = np.fromiter((pkt.service_start - pkt.arrival_time for pkt in packets), dtype=float, count=len(packets))
    bits = np.fromiter((pkt.bits for pkt in packets), dtype=float, count=len(packets))
    return waited * tick_ms + bits / capacity_at_service * 1000.0
