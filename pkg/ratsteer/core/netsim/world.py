"""
The discrete-time multi-RAT world.

One step (tick):
1. Poisson arrivals for all flows in one draw, enqueued at the BS each flow is bound to
2. Round-robin RBG allocation among backlogged UEs of every cell
3. Pooled cell rates from the radio map, FIFO service, delay accounting
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from ratsteer.models.radio import BaseStation, Rat, UserEquipment
from ratsteer.models.traffic import Packet, TrafficFlow
from ratsteer.schemas.scenario import LoadSpikeConfig, Scenario
from ratsteer.utils.seeding import SeedStreams
from ratsteer.core.radio import RadioMap, RoundRobinScheduler, build_base_stations, place_ues
from ratsteer.core.traffic import arrival_counts, assign_traffic_mix, make_packet
from .counters import TYPE_INDEX, KpiCounters
from .delay import delays_ms
from .queue import RatQueue

logger = logging.getLogger(__name__)

INITIAL_RAT = Rat.NR


class SimulationInvariantError(Exception):
    """Raised by strict worlds when an accounting invariant breaks"""

    pass


@dataclass
class FlowWindow:
    """Per-flow accumulators since the last controller decision"""

    delivered_bits: np.ndarray
    delivered_pkts: np.ndarray
    delay_sum_ms: np.ndarray
    generated_pkts: np.ndarray
    dropped_pkts: np.ndarray
    ticks: int = 0

    @classmethod
    def empty(cls, n_flows: int) -> "FlowWindow":
        return cls(
            delivered_bits=np.zeros(n_flows),
            delivered_pkts=np.zeros(n_flows, dtype=np.int64),
            delay_sum_ms=np.zeros(n_flows),
            generated_pkts=np.zeros(n_flows, dtype=np.int64),
            dropped_pkts=np.zeros(n_flows, dtype=np.int64),
        )


class NetworkWorld:
    """Topology, flows, queues and counters of one simulation instance"""

    def __init__(
        self,
        scenario: Scenario,
        seed: Optional[int] = None,
        arrival_seed: Optional[int] = None,
        strict: bool = False,
    ):
        self.scenario = scenario
        self.seed = scenario.seed if seed is None else seed
        self.arrival_seed = self.seed if arrival_seed is None else arrival_seed
        self.strict = strict

        streams = SeedStreams(self.seed)
        self.base_stations: List[BaseStation] = build_base_stations(scenario.topology, scenario.radio)
        ues = place_ues(scenario.topology, self.base_stations, streams.generator("topology"))
        self.radio_map = RadioMap(self.base_stations, ues, scenario.radio, streams.generator("shadowing"))
        self.ues: List[UserEquipment] = self.radio_map.ues
        self.flows: List[TrafficFlow] = assign_traffic_mix(
            self.ues,
            scenario.traffic.mix,
            streams.generator("traffic_mix"),
            offered_load_mbps=scenario.traffic.per_ue_load_mbps,
            initial_rat=INITIAL_RAT,
        )
        self._base_loads = [f.offered_load_mbps for f in self.flows]
        self._type_index = np.array([TYPE_INDEX[f.traffic_type] for f in self.flows], dtype=np.int64)
        self._arrival_rng = SeedStreams(self.arrival_seed).generator("arrivals")

        self.step_duration_ms = scenario.traffic.step_duration_ms
        self.step_duration_s = self.step_duration_ms / 1000.0
        self.queues: Dict[int, RatQueue] = {
            bs.id: RatQueue(bs.id, scenario.queue.capacity_pkts) for bs in self.base_stations
        }
        self.scheduler = RoundRobinScheduler(self.base_stations)
        self.reset()

        logger.info(
            f"World ready: {len(self.base_stations)} BSs, {len(self.ues)} UEs, "
            f"load={scenario.traffic.per_ue_load_mbps} Mbps/UE, seed={self.seed}, arrival_seed={self.arrival_seed}"
        )

    def reset(self) -> None:
        """Empty queues and counters, undo load spikes and put every flow back on its initial RAT"""
        for queue in self.queues.values():
            queue.clear()
            queue.dropped_pkts = 0
        self.scheduler.reset()
        for flow, load in zip(self.flows, self._base_loads):
            flow.offered_load_mbps = load
            self.bind(flow, INITIAL_RAT)
        self.counters = KpiCounters()
        self.window = FlowWindow.empty(len(self.flows))
        self.owners: Dict[int, np.ndarray] = {bs.id: np.full(bs.num_rbgs, -1, dtype=int) for bs in self.base_stations}
        self.rates: Dict[int, float] = {bs.id: 0.0 for bs in self.base_stations}
        self.last_delivered: Dict[int, list] = {bs.id: [] for bs in self.base_stations}
        self._last_departed_arrival: Dict[int, int] = {bs.id: -1 for bs in self.base_stations}
        self.now = 0

    def bind(self, flow: TrafficFlow, rat: Rat) -> None:
        """Point new packets of ``flow`` at the UE's serving cell of ``rat``"""
        flow.current_rat = rat
        flow.bound_bs_id = self.ues[flow.ue_id].serving(rat)

    def queue_of(self, flow: TrafficFlow, rat: Rat) -> RatQueue:
        return self.queues[self.ues[flow.ue_id].serving(rat)]

    def occupancy_pair(self, flow: TrafficFlow) -> tuple:
        """(Q_l(LTE), Q_l(NR)) seen by ``flow``"""
        return self.queue_of(flow, Rat.LTE).occupancy, self.queue_of(flow, Rat.NR).occupancy

    @property
    def queued_pkts(self) -> int:
        return sum(len(q) for q in self.queues.values())

    def step(self) -> None:
        now = self.now
        counters = self.counters
        window = self.window
        flows = self.flows

        counts = arrival_counts(flows, self.step_duration_s, self._arrival_rng)
        dropped = np.zeros(len(flows), dtype=np.int64)
        for i in np.flatnonzero(counts):
            flow = flows[i]
            queue = self.queues[flow.bound_bs_id]
            # Tail drop: only the packets that fit are materialised
            accepted = min(int(counts[i]), queue.free_slots)
            queue.enqueue_many([make_packet(flow, now) for _ in range(accepted)])
            dropped[i] = counts[i] - accepted
            queue.dropped_pkts += int(dropped[i])
        counters.record_counts(self._type_index, counts, dropped)
        window.generated_pkts += counts
        window.dropped_pkts += dropped

        owners = {
            bs.id: self.scheduler.allocate(bs, self.queues[bs.id].backlogged_ues())
            for bs in self.base_stations
        }
        rates = self.radio_map.cell_rates(owners)

        for bs in self.base_stations:
            rate = rates[bs.id]
            delivered = self.queues[bs.id].serve_step(rate * self.step_duration_s, now) if rate > 0 else []
            if delivered:
                self._account_delivered(delivered, rate)
            self.last_delivered[bs.id] = delivered

        self.owners = owners
        self.rates = rates
        window.ticks += 1
        self.now += 1

        if self.strict:
            self.check_invariants()

    def _account_delivered(self, delivered: List[Packet], rate: float) -> None:
        flow_ids = np.fromiter((pkt.flow_id for pkt in delivered), dtype=np.int64, count=len(delivered))
        bits = np.fromiter((pkt.bits for pkt in delivered), dtype=float, count=len(delivered))
        delays = delays_ms(delivered, rate, self.step_duration_ms)
        self.counters.record_delivered_many(self._type_index[flow_ids], bits, delays)
        window = self.window
        np.add.at(window.delivered_bits, flow_ids, bits)
        np.add.at(window.delivered_pkts, flow_ids, 1)
        np.add.at(window.delay_sum_ms, flow_ids, delays)

    def run(self, ticks: int) -> None:
        for _ in range(ticks):
            self.step()

    def collect_window(self) -> FlowWindow:
        """Hand over the per-flow accumulators and start a new window"""
        window = self.window
        self.window = FlowWindow.empty(len(self.flows))
        return window

    def check_conservation(self) -> None:
        counters = self.counters
        queued = self.queued_pkts
        if counters.generated_pkts != counters.delivered_pkts + counters.dropped_pkts + queued:
            raise SimulationInvariantError(
                f"Packet conservation violated at step {self.now}: generated={counters.generated_pkts}, "
                f"delivered={counters.delivered_pkts}, dropped={counters.dropped_pkts}, queued={queued}"
            )

    def check_invariants(self) -> None:
        """Conservation, occupancy bounds and FIFO departure order"""
        self.check_conservation()
        for bs_id, queue in self.queues.items():
            if not 0.0 <= queue.occupancy <= 1.0:
                raise SimulationInvariantError(f"Queue {bs_id} occupancy {queue.occupancy} outside [0, 1]")
            last = self._last_departed_arrival[bs_id]
            for pkt in self.last_delivered[bs_id]:
                if pkt.arrival_time < last:
                    raise SimulationInvariantError(
                        f"FIFO violated at BS {bs_id}: packet from step {pkt.arrival_time} left after one from step {last}"
                    )
                last = pkt.arrival_time
            self._last_departed_arrival[bs_id] = last

    def apply_load_spike(self, spike: LoadSpikeConfig) -> List[int]:
        """Scale the load of the first ``spike.ue_count`` UEs of one small cell; returns their flow ids"""
        small_cells = [bs for bs in self.base_stations if bs.rat is Rat.NR]
        cell = small_cells[spike.small_cell_index % len(small_cells)]
        spiked = [f for f in self.flows if self.ues[f.ue_id].serving_nr == cell.id][: spike.ue_count]
        for flow in spiked:
            flow.offered_load_mbps *= spike.load_factor
        logger.info(f"Load spike x{spike.load_factor} on gNB {cell.id} for flows {[f.flow_id for f in spiked]}")
        return [f.flow_id for f in spiked]
