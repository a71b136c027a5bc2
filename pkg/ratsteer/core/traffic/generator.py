"""
Traffic generation.

- Traffic mix assignment with the largest-remainder rule
- Poisson packet arrivals per step, mean matching the offered load
"""

import logging
import math
from typing import Dict, List, Mapping, Sequence

import numpy as np

from ratsteer.models.radio import Rat, UserEquipment
from ratsteer.models.traffic import QOS_PROFILES, Packet, TrafficFlow, TrafficType

logger = logging.getLogger(__name__)


class TrafficConfigError(ValueError):
    """Raised for an inconsistent traffic mix"""

    pass


def largest_remainder_counts(total: int, proportions: Mapping[TrafficType, float]) -> Dict[TrafficType, int]:
    """
    Integer counts summing to ``total`` that follow ``proportions``.

    Floors of the quotas first, then the leftover units go to the largest
    fractional parts; equal remainders keep the declared order of the mapping.
    """
    share = math.fsum(proportions.values())
    if abs(share - 1.0) > 1e-9:
        raise TrafficConfigError(f"traffic mix proportions must sum to 1, got {share:g}")
    if any(p < 0 for p in proportions.values()):
        raise TrafficConfigError("traffic mix proportions must be >= 0")

    types = list(proportions)
    quotas = [total * proportions[t] for t in types]
    counts = {t: int(math.floor(q)) for t, q in zip(types, quotas)}
    leftover = total - sum(counts.values())

    by_remainder = sorted(range(len(types)), key=lambda i: -(quotas[i] - math.floor(quotas[i])))
    for i in by_remainder[:leftover]:
        counts[types[i]] += 1
    return counts


def assign_traffic_mix(
    ues: Sequence[UserEquipment],
    proportions: Mapping[TrafficType, float],
    rng: np.random.Generator,
    offered_load_mbps: float = 0.0,
    initial_rat: Rat = Rat.NR,
) -> List[TrafficFlow]:
    """
    Give every UE exactly one flow.

    Args:
        ues: UEs in id order
        proportions: Traffic type -> fraction, summing to 1
        rng: Seeded generator; the type-to-UE shuffle is drawn from it
        offered_load_mbps: Offered load of every flow
        initial_rat: RAT every flow starts on

    Returns:
        One TrafficFlow per UE, flow id = position in ``ues``

    Raises:
        TrafficConfigError: If proportions do not sum to 1
    """
    counts = largest_remainder_counts(len(ues), proportions)
    types = [t for t in proportions for _ in range(counts[t])]
    order = rng.permutation(len(types))

    flows = []
    for flow_id, ue in enumerate(ues):
        traffic_type = types[order[flow_id]]
        flows.append(
            TrafficFlow(
                flow_id=flow_id,
                ue_id=ue.id,
                profile=QOS_PROFILES[traffic_type],
                offered_load_mbps=offered_load_mbps,
                current_rat=initial_rat,
                bound_bs_id=ue.serving(initial_rat),
            )
        )

    logger.info(
        "Assigned traffic mix: "
        + ", ".join(f"{t.value}={counts[t]}" for t in proportions)
    )
    return flows


def arrival_count(flow: TrafficFlow, step_duration: float, rng: np.random.Generator) -> int:
    """
    Number of packets arriving for ``flow`` in one step.

    Poisson with mean offered_load·step_duration/(packet_size·8), so the
    expected generated bit rate equals the offered load.
    """
    if flow.offered_load_mbps <= 0:
        return 0
    mean = flow.demand_bps * step_duration / flow.profile.packet_bits
    return int(rng.poisson(mean))


def arrival_means(flows: Sequence[TrafficFlow], step_duration: float) -> np.ndarray:
    """Poisson mean packets per step of every flow; zero for idle flows"""
    return np.fromiter(
        (max(f.demand_bps, 0.0) * step_duration / f.profile.packet_bits for f in flows), dtype=float, count=len(flows)
    )


def arrival_counts(flows: Sequence[TrafficFlow], step_duration: float, rng: np.random.Generator) -> np.ndarray:
    """Packets arriving for every flow in one step, one draw per flow whatever its load"""
    return rng.poisson(arrival_means(flows, step_duration))


def make_packet(flow: TrafficFlow, now: int) -> Packet:
    profile = flow.profile
    return Packet(
        flow_id=flow.flow_id,
        ue_id=flow.ue_id,
        traffic_type=profile.traffic_type,
        size=profile.packet_size,
        arrival_time=now,
    )


def generate_arrivals(
    flow: TrafficFlow,
    step_duration: float,
    rng: np.random.Generator,
    now: int = 0,
) -> List[Packet]:
    """Packets arriving for ``flow`` in one step"""
    return [make_packet(flow, now) for _ in range(arrival_count(flow, step_duration, rng))]
