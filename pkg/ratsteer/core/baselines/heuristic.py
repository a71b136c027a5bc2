"""
Weighted-sum threshold heuristic.

Three metrics in [0, 1]:
- load: (1 + Q_LTE − Q_NR) / 2, leans towards NR as the NR queue empties
- channel: (1 + c_NR − c_LTE) / 2 on normalised SINRs, leans towards NR
- service: 1 − T_QoS / max T_QoS, so Video 0, Gaming 0.5, Voice 0.99

W is their weighted sum and Th_t their plain mean. With the default weights
W − Th_t grows with load and channel and shrinks with service, so demanding
flows lean towards NR. The flow goes to NR when W > Th_t (orientation
configurable); a tie goes to LTE.

A saturated queue overrides the weighted comparison: when one RAT's queue is
full and the other's is not, the flow goes to the other RAT whatever its
traffic type.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ratsteer.models.steering import SteerAction
from ratsteer.models.traffic import QOS_PROFILES, TRAFFIC_TYPE_ORDER, TrafficType
from ratsteer.schemas.scenario import BaselineConfig
from ratsteer.core.env import SteeringEnv
from ratsteer.core.agents import StepLog

logger = logging.getLogger(__name__)

HEURISTIC_THRESHOLD = 1.0
TIE_TOLERANCE = 1e-12
SATURATED = 1.0

_MAX_T_QOS = max(p.t_qos_mbps for p in QOS_PROFILES.values())


@dataclass(frozen=True)
class HeuristicWeights:
    load: float = 0.4
    channel: float = 0.4
    service: float = 0.2
    nr_when_w_above: bool = True

    def __post_init__(self):
        if min(self.load, self.channel, self.service) < 0:
            raise ValueError(f"Heuristic weights must be >= 0, got {self}")

    @classmethod
    def from_config(cls, config: BaselineConfig) -> "HeuristicWeights":
        return cls(
            load=config.heuristic_load_weight,
            channel=config.heuristic_channel_weight,
            service=config.heuristic_service_weight,
            nr_when_w_above=config.heuristic_nr_when_w_above,
        )


def service_metric(traffic_type: TrafficType) -> float:
    return 1.0 - QOS_PROFILES[traffic_type].t_qos_mbps / _MAX_T_QOS


def heuristic_metrics(features: np.ndarray) -> Tuple[float, float, float]:
    """(load, channel, service) from one normalised state row"""
    one_hot = features[0:3]
    c_lte, c_nr = features[3], features[4]
    q_lte, q_nr = features[5], features[6]
    traffic_type = TRAFFIC_TYPE_ORDER[int(np.argmax(one_hot))]
    return (
        float((1.0 + q_lte - q_nr) / 2.0),
        float((1.0 + c_nr - c_lte) / 2.0),
        service_metric(traffic_type),
    )


def saturation_action(q_lte: float, q_nr: float) -> Optional[SteerAction]:
    """The RAT forced by a full queue, or None when neither or both are full"""
    lte_full, nr_full = q_lte >= SATURATED, q_nr >= SATURATED
    if nr_full and not lte_full:
        return SteerAction.TO_LTE
    if lte_full and not nr_full:
        return SteerAction.TO_NR
    return None


def heuristic_decide(
    load: float,
    channel: float,
    service: float,
    weights: HeuristicWeights = HeuristicWeights(),
) -> SteerAction:
    # load at either end of its range means one queue is full and the other empty
    if load <= 0.0:
        return SteerAction.TO_LTE
    if load >= 1.0:
        return SteerAction.TO_NR
    th_t = (load + channel + service) / 3.0
    w = weights.load * load + weights.channel * channel + weights.service * service
    if abs(w - th_t) <= TIE_TOLERANCE:
        return SteerAction.TO_LTE
    prefer_nr = w > th_t if weights.nr_when_w_above else w < th_t
    return SteerAction.TO_NR if prefer_nr else SteerAction.TO_LTE


def heuristic_steer(features: np.ndarray, weights: HeuristicWeights = HeuristicWeights()) -> SteerAction:
    """Decision for one normalised state row, saturated queues first"""
    forced = saturation_action(float(features[5]), float(features[6]))
    if forced is not None:
        return forced
    return heuristic_decide(*heuristic_metrics(features), weights)


class HeuristicAgent:
    """Stateless per-flow heuristic; acts through the env with Th = 1"""

    name = "heuristic"

    def __init__(self, weights: HeuristicWeights = HeuristicWeights()):
        self.weights = weights

    def begin_episode(self, env: SteeringEnv) -> None:
        pass

    def decide_period(self, env: SteeringEnv, learn: bool = True) -> StepLog:
        features = env.observe_all()
        actions = np.array([heuristic_steer(row, self.weights) for row in features], dtype=int).reshape(-1)
        outcome = env.step_period(actions, HEURISTIC_THRESHOLD)
        n_nr = int(np.sum(actions == SteerAction.TO_NR))
        return StepLog(
            step=env.period,
            epsilon=0.0,
            goal=HEURISTIC_THRESHOLD,
            lte_actions=len(actions) - n_nr,
            nr_actions=n_nr,
            r_in=float(np.mean(outcome.rewards)) if len(outcome.rewards) else 0.0,
            handovers=int(outcome.handovers.sum()),
            overrides=int(outcome.overridden.sum()),
        )
