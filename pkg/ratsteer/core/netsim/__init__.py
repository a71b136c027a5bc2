"""Queues, packet service, delay and KPI accounting, world stepping"""

from .queue import RatQueue
from .delay import DelayRecord, PacketQueryError, delay_of, delays_ms
from .counters import DelayHistogram, KpiCounters
from .world import NetworkWorld, SimulationInvariantError, FlowWindow

__all__ = [
    "RatQueue",
    "DelayRecord",
    "PacketQueryError",
    "delay_of",
    "delays_ms",
    "DelayHistogram",
    "KpiCounters",
    "NetworkWorld",
    "SimulationInvariantError",
    "FlowWindow",
]
