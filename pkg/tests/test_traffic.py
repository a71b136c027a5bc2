"""Unit tests for traffic mix assignment and arrivals"""

import numpy as np
import pytest

from ratsteer.models.radio import Rat, UserEquipment
from ratsteer.models.traffic import QOS_PROFILES, TrafficFlow, TrafficType
from ratsteer.core.traffic import (
    TrafficConfigError,
    arrival_count,
    arrival_counts,
    arrival_means,
    assign_traffic_mix,
    generate_arrivals,
    largest_remainder_counts,
)

DEFAULT_MIX = {TrafficType.VIDEO: 0.5, TrafficType.GAMING: 0.3, TrafficType.VOICE: 0.2}


def _ues(n):
    return [UserEquipment(id=i, position=(0.0, 0.0), serving_lte=0, serving_nr=1 + i % 2) for i in range(n)]


@pytest.mark.unit
class TestLargestRemainder:
    """Integer traffic mix counts"""

    def test_default_mix_over_60_ues(self):
        """The default mix over 60 UEs is 30 video, 18 gaming, 12 voice"""
        counts = largest_remainder_counts(60, DEFAULT_MIX)
        assert counts == {TrafficType.VIDEO: 30, TrafficType.GAMING: 18, TrafficType.VOICE: 12}

    def test_tie_goes_to_first_declared_type(self):
        """Thirds over 10 UEs give the extra unit to the first type"""
        third = 1 / 3
        counts = largest_remainder_counts(10, {TrafficType.VIDEO: third, TrafficType.GAMING: third, TrafficType.VOICE: third})
        assert counts == {TrafficType.VIDEO: 4, TrafficType.GAMING: 3, TrafficType.VOICE: 3}

    def test_counts_always_sum_to_total(self):
        """Largest-remainder counts sum to the total"""
        for total in range(0, 25):
            assert sum(largest_remainder_counts(total, DEFAULT_MIX).values()) == total

    def test_mix_not_summing_to_one(self):
        """A mix not summing to 1 raises"""
        with pytest.raises(TrafficConfigError) as exc_info:
            largest_remainder_counts(10, {TrafficType.VIDEO: 0.5, TrafficType.GAMING: 0.4})
        assert "sum to 1" in str(exc_info.value)


@pytest.mark.unit
class TestAssignTrafficMix:
    """One flow per UE"""

    def test_one_flow_per_ue_on_nr(self):
        """One flow per UE, starting on NR"""
        ues = _ues(10)
        flows = assign_traffic_mix(ues, DEFAULT_MIX, np.random.default_rng(0), offered_load_mbps=5.0)
        assert [f.flow_id for f in flows] == list(range(10))
        assert [f.ue_id for f in flows] == [ue.id for ue in ues]
        assert all(f.current_rat is Rat.NR for f in flows)
        assert all(f.bound_bs_id == ues[f.ue_id].serving_nr for f in flows)
        assert all(f.offered_load_mbps == 5.0 for f in flows)

    def test_type_counts_follow_mix(self):
        """Type counts follow the mix"""
        flows = assign_traffic_mix(_ues(60), DEFAULT_MIX, np.random.default_rng(1))
        types = [f.traffic_type for f in flows]
        assert types.count(TrafficType.VIDEO) == 30
        assert types.count(TrafficType.GAMING) == 18
        assert types.count(TrafficType.VOICE) == 12

    def test_reproducible_assignment(self):
        """The same generator gives the same assignment"""
        first = assign_traffic_mix(_ues(20), DEFAULT_MIX, np.random.default_rng(42))
        second = assign_traffic_mix(_ues(20), DEFAULT_MIX, np.random.default_rng(42))
        assert [f.traffic_type for f in first] == [f.traffic_type for f in second]


@pytest.mark.unit
class TestArrivals:
    """Poisson packet arrivals"""

    def _flow(self, load, traffic_type=TrafficType.VIDEO):
        return TrafficFlow(flow_id=3, ue_id=7, profile=QOS_PROFILES[traffic_type], offered_load_mbps=load, bound_bs_id=1)

    def test_mean_rate_matches_offered_load(self):
        """10 Mbps of 250-byte packets in 1 ms steps is 5 packets per step"""
        rng = np.random.default_rng(0)
        flow = self._flow(10.0)
        counts = [arrival_count(flow, 1e-3, rng) for _ in range(20000)]
        assert np.mean(counts) == pytest.approx(5.0, abs=0.05)

    def test_zero_load_generates_nothing(self):
        """A zero-load flow never generates packets"""
        rng = np.random.default_rng(0)
        assert all(generate_arrivals(self._flow(0.0), 1e-3, rng) == [] for _ in range(100))

    def test_packets_are_tagged(self):
        """Packets carry their flow, UE, type and arrival step"""
        rng = np.random.default_rng(3)
        packets = []
        while not packets:
            packets = generate_arrivals(self._flow(1.0, TrafficType.GAMING), 1e-3, rng, now=12)
        pkt = packets[0]
        assert (pkt.flow_id, pkt.ue_id, pkt.traffic_type, pkt.size, pkt.arrival_time) == (3, 7, TrafficType.GAMING, 120, 12)
        assert pkt.bits == 960
        assert not pkt.delivered

    def test_vector_means_follow_each_flow(self):
        """Per-flow means scale with load and packet size; idle flows get zero"""
        flows = [self._flow(10.0), self._flow(0.0), self._flow(1.0, TrafficType.GAMING)]
        np.testing.assert_allclose(arrival_means(flows, 1e-3), [5.0, 0.0, 1000.0 / 960.0], rtol=1e-12)

    def test_vector_counts_average_to_means(self):
        """One draw per flow per step, averaging to the per-flow means"""
        rng = np.random.default_rng(1)
        flows = [self._flow(10.0), self._flow(0.0), self._flow(2.0, TrafficType.VOICE)]
        draws = np.array([arrival_counts(flows, 1e-3, rng) for _ in range(20000)])
        assert draws.shape == (20000, 3)
        assert draws[:, 1].sum() == 0
        np.testing.assert_allclose(draws.mean(axis=0), arrival_means(flows, 1e-3), rtol=0.02, atol=1e-9)
