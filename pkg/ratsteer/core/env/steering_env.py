"""
Steering environment over a NetworkWorld.

One controller period: observe every flow, apply the chosen RATs under the
active queue threshold, run ``decision_ticks`` world steps, score each flow
with its intrinsic reward.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ratsteer.models.radio import Rat
from ratsteer.models.steering import Goal, RewardWeights, STATE_SIZE, SteerAction, SteeringState
from ratsteer.models.traffic import TRAFFIC_TYPE_ORDER, TrafficFlow
from ratsteer.schemas.report import FlowFeasibility
from ratsteer.core.netsim import FlowWindow, NetworkWorld
from ratsteer.core.radio import check_link_constraint, link_capacity
from .rewards import delay_param, intrinsic_reward, throughput_param

logger = logging.getLogger(__name__)

SINR_FLOOR_DB = -100.0


def _one_hot(flow: TrafficFlow) -> Tuple[float, float, float]:
    return tuple(1.0 if t is flow.traffic_type else 0.0 for t in TRAFFIC_TYPE_ORDER)


def observe(flow: TrafficFlow, world: NetworkWorld) -> SteeringState:
    """Raw (unnormalised) state of one flow after the last world step"""
    ue = world.ues[flow.ue_id]
    sinr = tuple(
        max(world.radio_map.measured_sinr_db(ue.id, ue.serving(rat), world.owners), SINR_FLOOR_DB)
        for rat in (Rat.LTE, Rat.NR)
    )
    return SteeringState(traffic_mix=_one_hot(flow), sinr_db=sinr, occupancy=world.occupancy_pair(flow))


def resolve_rat(requested: Rat, current: Rat, occupancy: Tuple[float, float], threshold: float) -> Tuple[Rat, bool]:
    """
    Effective RAT under the queue threshold.

    The request is deferred to the other RAT when its queue is at or above the
    threshold; when both are, the flow stays where it is.

    Returns:
        (effective RAT, whether the request was overridden)
    """
    q = {Rat.LTE: occupancy[0], Rat.NR: occupancy[1]}
    if q[requested] < threshold:
        return requested, False
    if q[requested.other] < threshold:
        return requested.other, True
    return current, current is not requested


def apply_action(flow: TrafficFlow, action: SteerAction, goal: Goal, world: NetworkWorld) -> bool:
    """
    Bind ``flow`` to the effective RAT under ``goal``.

    The request was overridden exactly when the flow ends up away from the
    requested RAT afterwards.

    Returns:
        True iff the flow changed RAT (a handover)
    """
    previous = flow.current_rat
    effective, _ = resolve_rat(SteerAction(action).rat, previous, world.occupancy_pair(flow), goal.threshold)
    world.bind(flow, effective)
    return effective is not previous


@dataclass
class FlowLedger:
    """Per-flow totals over an evaluation (or training) phase"""

    reward_sum: np.ndarray
    periods: np.ndarray
    delivered_bits: np.ndarray
    delivered_pkts: np.ndarray
    delay_sum_ms: np.ndarray
    generated_pkts: np.ndarray
    ticks: int = 0

    @classmethod
    def empty(cls, n_flows: int) -> "FlowLedger":
        return cls(
            reward_sum=np.zeros(n_flows),
            periods=np.zeros(n_flows, dtype=np.int64),
            delivered_bits=np.zeros(n_flows),
            delivered_pkts=np.zeros(n_flows, dtype=np.int64),
            delay_sum_ms=np.zeros(n_flows),
            generated_pkts=np.zeros(n_flows, dtype=np.int64),
        )

    def record(self, window: FlowWindow, rewards: np.ndarray) -> None:
        self.reward_sum += rewards
        self.periods += 1
        self.delivered_bits += window.delivered_bits
        self.delivered_pkts += window.delivered_pkts
        self.delay_sum_ms += window.delay_sum_ms
        self.generated_pkts += window.generated_pkts
        self.ticks += window.ticks

    def mean_rewards(self) -> np.ndarray:
        return np.divide(self.reward_sum, self.periods, out=np.zeros_like(self.reward_sum), where=self.periods > 0)


def objective_value(ledger: FlowLedger) -> float:
    """Σ over flows of the flow's mean intrinsic reward"""
    return float(np.sum(ledger.mean_rewards()))


@dataclass
class PeriodOutcome:
    """What one controller period did"""

    handovers: np.ndarray
    overridden: np.ndarray
    rewards: np.ndarray
    window: FlowWindow
    occupancy: np.ndarray  # (n_flows, 2) at decision time
    threshold: float


class SteeringEnv:
    """MDP view of a NetworkWorld for the steering agents"""

    def __init__(self, world: NetworkWorld):
        scenario = world.scenario
        steering = scenario.steering
        self.world = world
        self.weights = RewardWeights(c1=steering.c1, c2=steering.c2, handover_penalty=steering.handover_penalty)
        self.ratio_clip = steering.ratio_clip
        self.goals: List[Goal] = [Goal(index=i, threshold=th) for i, th in enumerate(steering.goals)]
        self.decision_ticks = steering.decision_ticks
        self.meta_period = steering.meta_period
        self.sinr_range = (scenario.radio.state_sinr_min_db, scenario.radio.state_sinr_max_db)
        self.spike = scenario.traffic.spike
        self.reset()

    @property
    def flows(self) -> List[TrafficFlow]:
        return self.world.flows

    @property
    def n_flows(self) -> int:
        return len(self.world.flows)

    def reset(self) -> None:
        self.world.reset()
        self.ledger = FlowLedger.empty(self.n_flows)
        self.period = 0
        self.spiked_flows: List[int] = []
        self.last_outcome: Optional[PeriodOutcome] = None

    def reset_ledger(self) -> None:
        self.ledger = FlowLedger.empty(self.n_flows)

    def observe(self, flow: TrafficFlow) -> SteeringState:
        return observe(flow, self.world)

    def _sinr_db(self, rat: Rat) -> np.ndarray:
        """Measured SINR (dB) of every flow towards its serving cell of ``rat``"""
        world = self.world
        ue_ids = np.array([f.ue_id for f in self.flows], dtype=int)
        cells = np.array([world.ues[u].serving(rat) for u in ue_ids], dtype=int)
        out = np.empty(len(ue_ids))
        for bs_id in np.unique(cells):
            mask = cells == bs_id
            out[mask] = world.radio_map.measured_sinr_db_many(ue_ids[mask], int(bs_id), world.owners)
        return np.maximum(out, SINR_FLOOR_DB)

    def _normalise_sinr(self, sinr_db: np.ndarray) -> np.ndarray:
        lo, hi = self.sinr_range
        return np.clip((sinr_db - lo) / (hi - lo), 0.0, 1.0)

    def occupancies(self) -> np.ndarray:
        """(n_flows, 2) queue occupancy pairs (LTE, NR)"""
        return np.array([self.world.occupancy_pair(f) for f in self.flows], dtype=float).reshape(-1, 2)

    def observe_all(self) -> np.ndarray:
        """Normalised feature matrix, one row per flow, same layout as ``SteeringState.features``"""
        features = np.empty((self.n_flows, STATE_SIZE))
        features[:, 0:3] = [_one_hot(f) for f in self.flows]
        features[:, 3] = self._normalise_sinr(self._sinr_db(Rat.LTE))
        features[:, 4] = self._normalise_sinr(self._sinr_db(Rat.NR))
        features[:, 5:7] = self.occupancies()
        return features

    def observe_meta(self) -> np.ndarray:
        """System-level state: traffic-type histogram, mean SINR pair, mean occupancy per RAT"""
        world = self.world
        features = np.empty(STATE_SIZE)
        counts = np.array([sum(f.traffic_type is t for f in self.flows) for t in TRAFFIC_TYPE_ORDER], dtype=float)
        features[0:3] = counts / max(len(self.flows), 1)
        features[3] = self._normalise_sinr(np.array([np.mean(self._sinr_db(Rat.LTE))]))[0]
        features[4] = self._normalise_sinr(np.array([np.mean(self._sinr_db(Rat.NR))]))[0]
        for column, rat in ((5, Rat.LTE), (6, Rat.NR)):
            queues = [world.queues[bs.id].occupancy for bs in world.base_stations if bs.rat is rat]
            features[column] = float(np.mean(queues)) if queues else 0.0
        return features

    def goal_for(self, threshold: float) -> Goal:
        """The goal-set entry for ``threshold``, or an off-set goal (index -1)"""
        for goal in self.goals:
            if goal.threshold == threshold:
                return goal
        return Goal(index=-1, threshold=threshold)

    def apply_actions(self, actions: Sequence[int], threshold: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Apply one action per flow under ``threshold``.

        Returns:
            (handover flags, override flags), one entry per flow
        """
        if len(actions) != self.n_flows:
            raise ValueError(f"Expected {self.n_flows} actions, got {len(actions)}")
        goal = self.goal_for(threshold)
        handovers = np.zeros(self.n_flows, dtype=bool)
        overridden = np.zeros(self.n_flows, dtype=bool)
        for i, (flow, action) in enumerate(zip(self.flows, actions)):
            action = SteerAction(int(action))
            handovers[i] = apply_action(flow, action, goal, self.world)
            overridden[i] = flow.current_rat is not action.rat
        return handovers, overridden

    def advance(self) -> FlowWindow:
        """Run one controller period of world steps"""
        if self.spike is not None and self.period == self.spike.start_period and not self.spiked_flows:
            self.spiked_flows = self.world.apply_load_spike(self.spike)
        self.world.collect_window()
        self.world.run(self.decision_ticks)
        self.period += 1
        return self.world.collect_window()

    def window_kpis(self, window: FlowWindow) -> Tuple[np.ndarray, np.ndarray]:
        """Per-flow (throughput Mbps, mean delay ms); delay is inf where nothing was delivered"""
        seconds = max(window.ticks, 1) * self.world.step_duration_s
        throughput = window.delivered_bits / seconds / 1e6
        delay = np.full(len(window.delivered_pkts), np.inf)
        np.divide(window.delay_sum_ms, window.delivered_pkts, out=delay, where=window.delivered_pkts > 0)
        return throughput, delay

    def intrinsic_rewards(self, window: FlowWindow, handovers: np.ndarray) -> np.ndarray:
        throughput, delay = self.window_kpis(window)
        rewards = np.empty(self.n_flows)
        for i, flow in enumerate(self.flows):
            d_ratio = 0.0 if np.isinf(delay[i]) else delay_param(delay[i], flow.profile, self.ratio_clip)
            t_ratio = throughput_param(throughput[i], flow.profile, self.ratio_clip)
            rewards[i] = intrinsic_reward(d_ratio, t_ratio, bool(handovers[i]), self.weights)
        return rewards

    def step_period(self, actions: Sequence[int], threshold: float) -> PeriodOutcome:
        occupancy = self.occupancies()
        handovers, overridden = self.apply_actions(actions, threshold)
        window = self.advance()
        rewards = self.intrinsic_rewards(window, handovers)
        self.ledger.record(window, rewards)
        logger.debug(
            f"Period {self.period}: th={threshold}, handovers={int(handovers.sum())}, "
            f"overrides={int(overridden.sum())}, mean r_in={rewards.mean():.4f}"
        )
        self.last_outcome = PeriodOutcome(
            handovers=handovers,
            overridden=overridden,
            rewards=rewards,
            window=window,
            occupancy=occupancy,
            threshold=threshold,
        )
        return self.last_outcome

    def objective_value(self) -> float:
        return objective_value(self.ledger)

    def wideband_capacity(self, flow: TrafficFlow) -> float:
        """Capacity (bits/s) of the flow's bound link if its UE held every RBG of the cell"""
        world = self.world
        bs = world.radio_map.bs(flow.bound_bs_id)
        owners = dict(world.owners)
        owners[bs.id] = np.full(bs.num_rbgs, flow.ue_id, dtype=int)
        link = world.radio_map.link(flow.ue_id, bs.id, owners)
        return link_capacity(link, bs, world.radio_map.interferers_of(bs.id))

    def feasibility(self) -> List[FlowFeasibility]:
        """Constraint diagnostics per flow over the ledger's phase"""
        ledger = self.ledger
        seconds = max(ledger.ticks, 1) * self.world.step_duration_s
        means = ledger.mean_rewards()
        report = []
        for i, flow in enumerate(self.flows):
            throughput = float(ledger.delivered_bits[i] / seconds / 1e6)
            delivered = int(ledger.delivered_pkts[i])
            delay = float(ledger.delay_sum_ms[i] / delivered) if delivered else 0.0
            latency_ok = delay <= flow.profile.d_qos_ms if delivered else ledger.generated_pkts[i] == 0
            required = flow.profile.t_qos_mbps
            report.append(
                FlowFeasibility(
                    flow_id=flow.flow_id,
                    traffic_type=flow.traffic_type.value,
                    throughput_mbps=throughput,
                    delay_ms=delay,
                    required_ge_available=required >= throughput,
                    available_ge_required=throughput >= required,
                    latency_ok=bool(latency_ok),
                    link_ok=check_link_constraint(
                        self.flows, self.wideband_capacity(flow), flow.ue_id, flow.bound_bs_id
                    ),
                    objective=float(means[i]),
                )
            )
        return report
