"""KpiReport assembly from an evaluated environment"""

from ratsteer.models.traffic import TRAFFIC_TYPE_ORDER
from ratsteer.schemas.report import KpiReport, TrafficTypeKpi
from ratsteer.core.env import SteeringEnv


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def build_report(env: SteeringEnv, agent: str, load_mbps: float, seed: int) -> KpiReport:
    """
    KPIs of everything the env's world did since its last reset.

    Throughput is delivered bits over elapsed time; network delay is the mean
    delay of delivered packets; the drop rate is dropped over generated.
    """
    world = env.world
    counters = world.counters
    seconds = world.now * world.step_duration_s

    per_type = {}
    for traffic_type in TRAFFIC_TYPE_ORDER:
        c = counters.per_type[traffic_type]
        per_type[traffic_type.value] = TrafficTypeKpi(
            generated_pkts=c.generated_pkts,
            delivered_pkts=c.delivered_pkts,
            dropped_pkts=c.dropped_pkts,
            throughput_mbps=_ratio(c.delivered_bits, seconds) / 1e6,
            delay_ms=_ratio(c.sum_delay_ms, c.delivered_pkts),
            drop_rate=_ratio(c.dropped_pkts, c.generated_pkts),
        )

    flows = env.feasibility()
    return KpiReport(
        agent=agent,
        load_mbps=load_mbps,
        seed=seed,
        avg_system_throughput=_ratio(counters.delivered_bits, seconds) / 1e6,
        network_delay=_ratio(counters.sum_delay_ms, counters.delivered_pkts),
        delay_p50_ms=counters.histogram.percentile(50),
        delay_p95_ms=counters.histogram.percentile(95),
        packet_drop_rate=_ratio(counters.dropped_pkts, counters.generated_pkts),
        objective_value=env.objective_value(),
        generated_pkts=counters.generated_pkts,
        delivered_pkts=counters.delivered_pkts,
        dropped_pkts=counters.dropped_pkts,
        queued_pkts=world.queued_pkts,
        feasible_flows=sum(f.latency_ok and f.available_ge_required and f.link_ok for f in flows),
        per_type=per_type,
        flows=flows,
    )
