"""Unit tests for path loss, SINR, capacity, scheduling and the radio map"""

import math

import numpy as np
import pytest

from ratsteer.models.radio import BaseStation, Rat, RadioLink
from ratsteer.models.traffic import QOS_PROFILES, TrafficFlow, TrafficType
from ratsteer.schemas.scenario import RadioConfig, TopologyConfig
from ratsteer.core.radio import (
    RadioDomainError,
    RadioMap,
    RoundRobinScheduler,
    SPEED_OF_LIGHT,
    build_base_stations,
    check_link_constraint,
    compute_sinr,
    link_capacity,
    linear_to_db,
    path_loss_db,
    place_ues,
)
from ratsteer.core.harness.selfcheck import check_capacity_oracle


def _bs(bs_id, rat=Rat.NR, power=2.0, freq=3.5e9, bandwidth=2e6, rbgs=2, position=(0.0, 0.0)):
    return BaseStation(
        id=bs_id,
        rat=rat,
        position=position,
        tx_power_total=power,
        carrier_freq=freq,
        bandwidth=bandwidth,
        num_rbgs=rbgs,
    )


@pytest.mark.unit
class TestPathLoss:
    """Log-distance path loss"""

    def test_reference_distance_is_free_space(self):
        """At d0 the loss equals free-space loss"""
        expected = 20 * math.log10(4 * math.pi * 1.0 * 3.5e9 / SPEED_OF_LIGHT)
        assert path_loss_db(1.0, 3.5e9) == pytest.approx(expected, rel=1e-12)

    def test_doubling_distance_adds_exponent_slope(self):
        """Each doubling adds 10·n·log10(2) dB"""
        delta = path_loss_db(200.0, 8e8) - path_loss_db(100.0, 8e8)
        assert delta == pytest.approx(10 * 3.5 * math.log10(2), rel=1e-12)

    @pytest.mark.parametrize("distance,freq", [(0.0, 3.5e9), (-5.0, 3.5e9), (10.0, 0.0)])
    def test_invalid_inputs_raise(self, distance, freq):
        """Non-positive distance or frequency is rejected"""
        with pytest.raises(RadioDomainError):
            path_loss_db(distance, freq)


@pytest.mark.unit
class TestSinrAndCapacity:
    """Per-RBG SINR and Shannon capacity on hand-built links"""

    @pytest.fixture
    def serving(self):
        return _bs(1)

    def _link(self, alloc=(1, 1), interferers=None):
        interferers = interferers or {}
        return RadioLink(
            ue=0,
            bs=1,
            channel_gain=np.array([1e-9, 1e-9]),
            alloc_indicator=np.array(alloc),
            noise_psd=1e-20,
            interferer_gain={k: v[0] for k, v in interferers.items()},
            interferer_alloc={k: v[1] for k, v in interferers.items()},
        )

    def test_noise_limited_sinr(self, serving):
        """sinr = ρg / (ωX0) with no interferers"""
        link = self._link()
        # ρ = 1 W, g = 1e-9, ω = 1 MHz, X0 = 1e-20 W/Hz
        assert compute_sinr(link, 0, serving, [serving]) == pytest.approx(1e5, rel=1e-12)

    def test_co_channel_interference_only_on_active_rbgs(self, serving):
        """An interferer counts only on the RBGs it transmits on"""
        other = _bs(2)
        link = self._link(interferers={2: (np.array([1e-12, 1e-12]), np.array([1, 0]))})
        expected_rbg0 = 1e-9 / (1e-14 + 1.0 * 1e-12)
        assert compute_sinr(link, 0, serving, [serving, other]) == pytest.approx(expected_rbg0, rel=1e-12)
        assert compute_sinr(link, 1, serving, [serving, other]) == pytest.approx(1e5, rel=1e-12)

    def test_unallocated_rbg_has_zero_sinr(self, serving):
        """An RBG the UE does not hold has zero SINR"""
        link = self._link(alloc=(0, 1))
        assert compute_sinr(link, 0, serving, [serving]) == 0.0

    def test_rbg_out_of_range(self, serving):
        """RBG indices beyond the cell raise"""
        with pytest.raises(IndexError):
            compute_sinr(self._link(), 5, serving, [serving])

    def test_capacity_sums_shannon_over_rbgs(self, serving):
        """ξ = Σ ω·log2(1 + sinr), stored on the link"""
        link = self._link()
        capacity = link_capacity(link, serving, [serving])
        assert capacity == pytest.approx(2 * 1e6 * math.log2(1 + 1e5), rel=1e-12)
        assert link.capacity == capacity
        assert link.sinr.shape == (2,)

    def test_capacity_nondecreasing_in_serving_gain(self, serving):
        """A stronger serving gain never lowers capacity"""
        capacities = []
        for gain in np.logspace(-14, -6, 9):
            link = RadioLink(ue=0, bs=1, channel_gain=np.full(2, gain), alloc_indicator=np.ones(2), noise_psd=1e-20)
            capacities.append(link_capacity(link, serving, [serving]))
        assert all(b >= a for a, b in zip(capacities, capacities[1:]))
        assert capacities[-1] > capacities[0]

    @pytest.mark.parametrize("power", [0.5, 2.0, 40.0])
    def test_interferer_never_increases_capacity(self, serving, power):
        """Switching an interferer on can only lower capacity"""
        other = _bs(2, power=power)
        alone = link_capacity(self._link(), serving, [serving, other])
        crowded = self._link(interferers={2: (np.array([1e-12, 1e-11]), np.array([1, 1]))})
        assert link_capacity(crowded, serving, [serving, other]) < alone

    def test_zero_power_interferer_contributes_nothing(self, serving):
        """A BS transmitting at 0 W adds exactly zero interference"""
        silent = _bs(2, power=0.0)
        link = self._link(interferers={2: (np.array([1e-6, 1e-6]), np.array([1, 1]))})
        assert compute_sinr(link, 0, serving, [serving, silent]) == compute_sinr(self._link(), 0, serving, [serving])
        assert link_capacity(link, serving, [serving, silent]) == link_capacity(self._link(), serving, [serving])

    def test_pooled_rates_match_brute_force(self):
        """Vectorised cell rates agree with a per-RBG oracle on random small deployments"""
        result = check_capacity_oracle(instances=100, seed=7)
        assert result.passed, result.detail

    def test_non_binary_allocation_rejected(self):
        """Allocation entries must be 0 or 1"""
        with pytest.raises(ValueError) as exc_info:
            self._link(alloc=(2, 0))
        assert "binary" in str(exc_info.value)


@pytest.mark.unit
class TestLinkConstraint:
    """Bound demand against link capacity"""

    @pytest.fixture
    def flow(self):
        return TrafficFlow(
            flow_id=0,
            ue_id=3,
            profile=QOS_PROFILES[TrafficType.VIDEO],
            offered_load_mbps=10.0,
            current_rat=Rat.NR,
            bound_bs_id=2,
        )

    def test_boundary_is_inclusive(self, flow):
        """Demand equal to capacity satisfies the link constraint"""
        assert check_link_constraint([flow], 10e6, 3, 2)

    def test_demand_above_capacity(self, flow):
        """Demand above capacity violates it"""
        assert not check_link_constraint([flow], 9.999e6, 3, 2)

    def test_flow_bound_elsewhere_does_not_count(self, flow):
        """Flows bound to another link add no demand"""
        assert check_link_constraint([flow], 0.0, 3, 0)


@pytest.mark.unit
class TestRoundRobinScheduler:
    """RBG assignment"""

    def test_cycles_over_active_ues(self):
        """RBGs cycle over the backlogged UEs"""
        bs = _bs(1, rbgs=4)
        scheduler = RoundRobinScheduler([bs])
        assert scheduler.allocate(bs, [2, 5, 7]).tolist() == [2, 5, 7, 2]
        assert scheduler.allocate(bs, [2, 5, 7]).tolist() == [5, 7, 2, 5]

    def test_idle_cell(self):
        """A cell with no backlog allocates nothing"""
        bs = _bs(1, rbgs=3)
        assert RoundRobinScheduler([bs]).allocate(bs, []).tolist() == [-1, -1, -1]

    def test_reset_restarts_cycle(self):
        """reset restarts the round robin"""
        bs = _bs(1, rbgs=2)
        scheduler = RoundRobinScheduler([bs])
        scheduler.allocate(bs, [0, 1, 2])
        scheduler.reset()
        assert scheduler.allocate(bs, [0, 1, 2]).tolist() == [0, 1]


@pytest.mark.unit
class TestTopologyAndRadioMap:
    """Deployment geometry and the vectorised radio state"""

    @pytest.fixture
    def radio_map(self):
        topology = TopologyConfig(small_cell_count=4, ue_count=12)
        radio = RadioConfig()
        stations = build_base_stations(topology, radio)
        ues = place_ues(topology, stations, np.random.default_rng(4))
        return RadioMap(stations, ues, radio, np.random.default_rng(5))

    def test_macro_and_small_cells(self):
        """One macro eNB and the configured gNBs"""
        stations = build_base_stations(TopologyConfig(), RadioConfig())
        assert [bs.rat for bs in stations] == [Rat.LTE] + [Rat.NR] * 4
        assert stations[0].position == (0.0, 0.0)
        for bs in stations[1:]:
            assert math.dist(bs.position, (0.0, 0.0)) == pytest.approx(250.0)
        assert stations[0].per_rbg_power == pytest.approx(4.0)
        assert stations[1].per_rbg_bandwidth == pytest.approx(1e6)

    def test_ues_inside_small_cells(self):
        """Every UE lies inside a small cell"""
        topology = TopologyConfig(small_cell_count=4, ue_count=40)
        stations = build_base_stations(topology, RadioConfig())
        ues = place_ues(topology, stations, np.random.default_rng(0))
        assert [ue.id for ue in ues] == list(range(40))
        for ue in ues:
            assert min(math.dist(ue.position, bs.position) for bs in stations[1:]) <= 100.0 + 1e-9

    def test_serving_nr_is_strongest_gnb(self, radio_map):
        """The serving gNB has the strongest gain"""
        gnbs = [bs for bs in radio_map.base_stations if bs.rat is Rat.NR]
        for ue in radio_map.ues:
            best = max(gnbs, key=lambda bs: radio_map.gain_between(ue.id, bs.id))
            assert ue.serving_nr == best.id
            assert ue.serving_lte == 0

    def test_lte_never_interferes_with_nr(self, radio_map):
        """LTE and NR are on separate bands"""
        assert all(bs.rat is Rat.NR for bs in radio_map.interferers_of(1))
        assert radio_map.interferers_of(0) == []

    def test_cell_rate_matches_scalar_capacity(self, radio_map):
        """Vectorised pooled rate equals link_capacity when one UE holds every RBG"""
        ue = radio_map.ues[0]
        serving = radio_map.bs(ue.serving_nr)
        owners = {bs.id: np.full(bs.num_rbgs, ue.id if bs.id == serving.id else 1, dtype=int) for bs in radio_map.base_stations}
        link = radio_map.link(ue.id, serving.id, owners)
        expected = link_capacity(link, serving, radio_map.interferers_of(serving.id))
        assert radio_map.cell_rates(owners)[serving.id] == pytest.approx(expected, rel=1e-9)

    def test_measured_sinr_matches_scalar_sinr(self, radio_map):
        """SINR report over held RBGs agrees with compute_sinr"""
        ue = radio_map.ues[1]
        serving = radio_map.bs(ue.serving_nr)
        owners = {bs.id: np.full(bs.num_rbgs, -1, dtype=int) for bs in radio_map.base_stations}
        owners[serving.id][:] = ue.id
        link = radio_map.link(ue.id, serving.id, owners)
        expected = compute_sinr(link, 0, serving, radio_map.interferers_of(serving.id))
        assert radio_map.measured_sinr_db(ue.id, serving.id, owners) == pytest.approx(float(linear_to_db(expected)), rel=1e-9)

    def test_idle_cells_have_zero_rate(self, radio_map):
        """Cells with no owners have zero rate"""
        owners = {bs.id: np.full(bs.num_rbgs, -1, dtype=int) for bs in radio_map.base_stations}
        assert all(rate == 0.0 for rate in radio_map.cell_rates(owners).values())
