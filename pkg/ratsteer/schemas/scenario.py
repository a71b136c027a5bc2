"""Scenario schema. Defaults reproduce the reference deployment:
one eNB + four gNBs, 60 UEs, 50/30/20 video/gaming/voice mix."""

import enum
import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ratsteer.models.traffic import TrafficType


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AgentKind(str, enum.Enum):
    """Steering schemes selectable with --agent"""
    HRL = "hrl"
    DQN = "dqn"
    HEURISTIC = "heuristic"


class CellConfig(_Strict):
    """Per-RAT radio parameters"""

    carrier_freq_mhz: float = Field(..., gt=0)
    tx_power_w: float = Field(..., ge=0)
    bandwidth_mhz: float = Field(..., gt=0)
    num_rbgs: int = Field(..., ge=1, le=1000)


class RadioConfig(_Strict):
    """Propagation and noise"""

    lte: CellConfig = CellConfig(carrier_freq_mhz=800.0, tx_power_w=40.0, bandwidth_mhz=10.0, num_rbgs=10)
    nr: CellConfig = CellConfig(carrier_freq_mhz=3500.0, tx_power_w=20.0, bandwidth_mhz=20.0, num_rbgs=20)
    noise_psd_dbm_hz: float = Field(default=-174.0, ge=-250.0, le=0.0)
    path_loss_exponent: float = Field(default=3.5, gt=0)
    reference_distance_m: float = Field(default=1.0, gt=0)
    shadowing_enabled: bool = False
    shadowing_std_db: float = Field(default=8.0, ge=0)
    state_sinr_min_db: float = -10.0
    state_sinr_max_db: float = 50.0

    @model_validator(mode="after")
    def _check_sinr_range(self) -> "RadioConfig":
        if self.state_sinr_max_db <= self.state_sinr_min_db:
            raise ValueError("state_sinr_max_db must exceed state_sinr_min_db")
        return self


class TopologyConfig(_Strict):
    """Macro cell with small cells evenly spaced on a ring"""

    macro_radius_m: float = Field(default=500.0, gt=0)
    small_cell_count: int = Field(default=4, ge=1, le=64)
    small_cell_offset_m: float = Field(default=250.0, ge=0)
    small_cell_radius_m: float = Field(default=100.0, gt=0)
    ue_count: int = Field(default=60, ge=1, le=10000)

    @model_validator(mode="after")
    def _check_inside_macro(self) -> "TopologyConfig":
        if self.small_cell_offset_m + self.small_cell_radius_m > self.macro_radius_m:
            raise ValueError("small cells must lie inside the macro cell")
        return self


class LoadSpikeConfig(_Strict):
    """Load spike on one small cell, used by steering traces"""

    start_period: int = Field(default=0, ge=0)
    small_cell_index: int = Field(default=0, ge=0)
    ue_count: int = Field(default=5, ge=1)
    load_factor: float = Field(default=3.0, gt=0)


class TrafficConfig(_Strict):
    """Traffic mix and offered load"""

    mix: Dict[TrafficType, float] = Field(
        default_factory=lambda: {
            TrafficType.VIDEO: 0.5,
            TrafficType.GAMING: 0.3,
            TrafficType.VOICE: 0.2,
        }
    )
    per_ue_load_mbps: float = Field(default=10.0, ge=0)
    step_duration_ms: float = Field(default=1.0, gt=0)
    spike: Optional[LoadSpikeConfig] = None

    @field_validator("mix")
    @classmethod
    def _check_mix(cls, mix: Dict[TrafficType, float]) -> Dict[TrafficType, float]:
        if not mix:
            raise ValueError("traffic mix must name at least one traffic type")
        if any(p < 0 for p in mix.values()):
            raise ValueError("traffic mix proportions must be >= 0")
        total = math.fsum(mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"traffic mix proportions must sum to 1, got {total:g}")
        return mix


class QueueConfig(_Strict):
    """Per-BS transmission queue"""

    capacity_pkts: int = Field(default=500, ge=1)


class SteeringConfig(_Strict):
    """MDP parameters: reward weights, goal set, decision cadence"""

    c1: float = Field(default=0.5, ge=0)
    c2: float = Field(default=0.5, ge=0)
    handover_penalty: float = Field(default=0.25, ge=0)
    ratio_clip: float = Field(default=10.0, gt=0)
    goals: List[float] = Field(default_factory=lambda: [0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    decision_ticks: int = Field(default=10, ge=1)
    meta_period: int = Field(default=100, ge=1)

    @field_validator("goals")
    @classmethod
    def _check_goals(cls, goals: List[float]) -> List[float]:
        if not goals:
            raise ValueError("goal set must not be empty")
        if any(not 0.0 < g <= 1.0 for g in goals):
            raise ValueError("goals must lie in (0, 1]")
        if any(b <= a for a, b in zip(goals, goals[1:])):
            raise ValueError("goals must be sorted ascending without duplicates")
        return goals


class LearningConfig(_Strict):
    """Value network, replay and target sync"""

    hidden_layers: List[int] = Field(default_factory=lambda: [64, 64])
    learning_rate: float = Field(default=1e-3, gt=0)
    discount: float = Field(default=0.9, ge=0, le=1)
    buffer_capacity: int = Field(default=10000, ge=1)
    batch_size: int = Field(default=32, ge=1)
    target_sync_updates: int = Field(default=200, ge=1)

    @field_validator("hidden_layers")
    @classmethod
    def _check_hidden(cls, hidden: List[int]) -> List[int]:
        if any(h < 1 for h in hidden):
            raise ValueError("hidden layer sizes must be >= 1")
        return hidden

    @model_validator(mode="after")
    def _check_batch(self) -> "LearningConfig":
        if self.batch_size > self.buffer_capacity:
            raise ValueError("batch_size must not exceed buffer_capacity")
        return self


class EpsilonConfig(_Strict):
    """Linear ε decay"""

    start: float = Field(default=1.0, ge=0, le=1)
    end: float = Field(default=0.05, ge=0, le=1)
    decay_fraction: float = Field(default=0.5, gt=0, le=1)


class BaselineConfig(_Strict):
    """Static-threshold DQN and weighted-sum heuristic"""

    dqn_threshold: float = Field(default=0.8, gt=0, le=1)
    heuristic_load_weight: float = Field(default=0.4, ge=0)
    heuristic_channel_weight: float = Field(default=0.4, ge=0)
    heuristic_service_weight: float = Field(default=0.2, ge=0)
    heuristic_nr_when_w_above: bool = True


class ExperimentConfig(_Strict):
    """Training, evaluation and sweep grid"""

    episodes: int = Field(default=2, ge=0)
    episode_periods: int = Field(default=5000, ge=1)
    eval_periods: int = Field(default=1000, ge=1)
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    eval_seed_offset: int = Field(default=10000, ge=1)
    loads_mbps: List[float] = Field(default_factory=lambda: [5.0, 10.0])
    thresholds: List[float] = Field(default_factory=lambda: [0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    agents: List[AgentKind] = Field(
        default_factory=lambda: [AgentKind.HRL, AgentKind.DQN, AgentKind.HEURISTIC]
    )
    trace_periods: int = Field(default=500, ge=1)

    @field_validator("seeds")
    @classmethod
    def _check_seeds(cls, seeds: List[int]) -> List[int]:
        if not seeds:
            raise ValueError("at least one seed is required")
        if any(s < 0 for s in seeds):
            raise ValueError("seeds must be >= 0")
        return seeds

    @field_validator("loads_mbps")
    @classmethod
    def _check_loads(cls, loads: List[float]) -> List[float]:
        if any(load < 0 for load in loads):
            raise ValueError("loads must be >= 0")
        return loads

    @field_validator("thresholds")
    @classmethod
    def _check_thresholds(cls, thresholds: List[float]) -> List[float]:
        if any(not 0.0 < t <= 1.0 for t in thresholds):
            raise ValueError("thresholds must lie in (0, 1]")
        return thresholds


class Scenario(_Strict):
    """Everything a run needs"""

    topology: TopologyConfig = TopologyConfig()
    radio: RadioConfig = RadioConfig()
    traffic: TrafficConfig = TrafficConfig()
    queue: QueueConfig = QueueConfig()
    steering: SteeringConfig = SteeringConfig()
    learning: LearningConfig = LearningConfig()
    epsilon: EpsilonConfig = EpsilonConfig()
    baselines: BaselineConfig = BaselineConfig()
    experiment: ExperimentConfig = ExperimentConfig()
    agent: AgentKind = AgentKind.HRL
    seed: int = Field(default=0, ge=0)

    def with_load(self, load_mbps: float) -> "Scenario":
        traffic = self.traffic.model_copy(update={"per_ue_load_mbps": load_mbps})
        return self.model_copy(update={"traffic": traffic})

    def with_agent(self, agent: AgentKind, seed: Optional[int] = None) -> "Scenario":
        update = {"agent": agent}
        if seed is not None:
            update["seed"] = seed
        return self.model_copy(update=update)

    def with_dqn_threshold(self, threshold: float) -> "Scenario":
        baselines = self.baselines.model_copy(update={"dqn_threshold": threshold})
        return self.model_copy(update={"baselines": baselines, "agent": AgentKind.DQN})
