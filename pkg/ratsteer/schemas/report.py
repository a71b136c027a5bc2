"""KPI report schemas"""

from typing import Dict, List

from pydantic import BaseModel, Field, model_validator


class TrafficTypeKpi(BaseModel):
    """Per traffic class breakdown"""

    generated_pkts: int = Field(..., ge=0)
    delivered_pkts: int = Field(..., ge=0)
    dropped_pkts: int = Field(..., ge=0)
    throughput_mbps: float = Field(..., ge=0)
    delay_ms: float = Field(..., ge=0)
    drop_rate: float = Field(..., ge=0, le=1)


class FlowFeasibility(BaseModel):
    """Constraint diagnostics for one flow over the evaluation phase"""

    flow_id: int
    traffic_type: str
    throughput_mbps: float
    delay_ms: float
    # The bitrate constraint direction is ambiguous, so both orderings are reported
    required_ge_available: bool
    available_ge_required: bool
    latency_ok: bool
    link_ok: bool
    objective: float


class KpiReport(BaseModel):
    """Evaluation-phase KPIs of one (agent, load, seed) run"""

    agent: str
    load_mbps: float
    seed: int
    avg_system_throughput: float = Field(..., ge=0, description="Mbps")
    network_delay: float = Field(..., ge=0, description="mean delay of delivered packets, ms")
    delay_p50_ms: float = Field(..., ge=0)
    delay_p95_ms: float = Field(..., ge=0)
    packet_drop_rate: float = Field(..., ge=0, le=1)
    objective_value: float
    generated_pkts: int = Field(..., ge=0)
    delivered_pkts: int = Field(..., ge=0)
    dropped_pkts: int = Field(..., ge=0)
    queued_pkts: int = Field(..., ge=0)
    feasible_flows: int = Field(..., ge=0)
    per_type: Dict[str, TrafficTypeKpi] = Field(default_factory=dict)
    flows: List[FlowFeasibility] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_conservation(self) -> "KpiReport":
        if self.generated_pkts != self.delivered_pkts + self.dropped_pkts + self.queued_pkts:
            raise ValueError(
                f"packet conservation violated: generated={self.generated_pkts}, "
                f"delivered={self.delivered_pkts}, dropped={self.dropped_pkts}, queued={self.queued_pkts}"
            )
        return self

    def kpi_row(self) -> Dict[str, object]:
        """Row of kpi.csv"""
        return {
            "agent": self.agent,
            "load": self.load_mbps,
            "seed": self.seed,
            "throughput_mbps": self.avg_system_throughput,
            "delay_ms": self.network_delay,
            "drop_rate": self.packet_drop_rate,
            "objective": self.objective_value,
        }
