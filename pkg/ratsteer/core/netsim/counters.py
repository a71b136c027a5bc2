"""KPI counters backing the evaluation report"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ratsteer.models.traffic import QOS_PROFILES, TRAFFIC_TYPE_ORDER, TrafficType

logger = logging.getLogger(__name__)

# Initial span: ten times the loosest delay budget
DEFAULT_HISTOGRAM_SPAN_MS = 10.0 * max(p.d_qos_ms for p in QOS_PROFILES.values())

TYPE_INDEX: Dict[TrafficType, int] = {t: i for i, t in enumerate(TRAFFIC_TYPE_ORDER)}


class DelayHistogram:
    """
    Fixed-width delay histogram for percentiles without storing every sample.

    ``max_ms`` is the initial span only: a delay beyond it grows the bin
    array, so tail percentiles never collapse into a last catch-all bin.
    """

    def __init__(self, bin_ms: float = 0.1, max_ms: float = DEFAULT_HISTOGRAM_SPAN_MS):
        if bin_ms <= 0 or max_ms <= 0:
            raise ValueError(f"Histogram bin and span must be > 0, got bin_ms={bin_ms}, max_ms={max_ms}")
        self.bin_ms = bin_ms
        self.counts = np.zeros(int(np.ceil(max_ms / bin_ms)) + 1, dtype=np.int64)

    @property
    def span_ms(self) -> float:
        return len(self.counts) * self.bin_ms

    def _grow(self, max_index: int) -> None:
        size = len(self.counts)
        while size <= max_index:
            size *= 2
        logger.debug(f"Delay histogram grown to {size * self.bin_ms:.1f} ms")
        self.counts = np.concatenate([self.counts, np.zeros(size - len(self.counts), dtype=np.int64)])

    def add(self, delay_ms: float) -> None:
        self.add_many(np.array([delay_ms], dtype=float))

    def add_many(self, delays_ms: np.ndarray) -> None:
        if len(delays_ms) == 0:
            return
        indices = (np.asarray(delays_ms, dtype=float) / self.bin_ms).astype(np.int64)
        top = int(indices.max())
        if top >= len(self.counts):
            self._grow(top)
        np.add.at(self.counts, indices, 1)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def percentile(self, q: float) -> float:
        """Upper edge of the bin holding the q-th percentile (0 when empty)"""
        total = self.total
        if total == 0:
            return 0.0
        rank = q / 100.0 * total
        index = int(np.searchsorted(np.cumsum(self.counts), max(rank, 1), side="left"))
        return (index + 1) * self.bin_ms


@dataclass
class TypeCounters:
    generated_pkts: int = 0
    delivered_pkts: int = 0
    dropped_pkts: int = 0
    delivered_bits: int = 0
    sum_delay_ms: float = 0.0


@dataclass
class KpiCounters:
    """Packet and bit accounting per traffic type"""

    per_type: Dict[TrafficType, TypeCounters] = field(
        default_factory=lambda: {t: TypeCounters() for t in TRAFFIC_TYPE_ORDER}
    )
    histogram: DelayHistogram = field(default_factory=DelayHistogram)

    def record_generated(self, traffic_type: TrafficType, count: int = 1) -> None:
        self.per_type[traffic_type].generated_pkts += count

    def record_dropped(self, traffic_type: TrafficType, count: int = 1) -> None:
        self.per_type[traffic_type].dropped_pkts += count

    def record_delivered(self, traffic_type: TrafficType, bits: int, delay_ms: float) -> None:
        counters = self.per_type[traffic_type]
        counters.delivered_pkts += 1
        counters.delivered_bits += bits
        counters.sum_delay_ms += delay_ms
        self.histogram.add(delay_ms)

    def record_counts(self, type_index: np.ndarray, generated: np.ndarray, dropped: np.ndarray) -> None:
        """Generated and dropped packet counts of many flows; ``type_index`` follows TRAFFIC_TYPE_ORDER"""
        n_types = len(TRAFFIC_TYPE_ORDER)
        gen = np.bincount(type_index, weights=generated, minlength=n_types)
        drop = np.bincount(type_index, weights=dropped, minlength=n_types)
        for i, traffic_type in enumerate(TRAFFIC_TYPE_ORDER):
            self.per_type[traffic_type].generated_pkts += int(gen[i])
            self.per_type[traffic_type].dropped_pkts += int(drop[i])

    def record_delivered_many(self, type_index: np.ndarray, bits: np.ndarray, delays_ms: np.ndarray) -> None:
        """Deliveries of one step, one entry per packet"""
        if len(type_index) == 0:
            return
        n_types = len(TRAFFIC_TYPE_ORDER)
        pkts = np.bincount(type_index, minlength=n_types)
        bit_sums = np.bincount(type_index, weights=bits, minlength=n_types)
        delay_sums = np.bincount(type_index, weights=delays_ms, minlength=n_types)
        for i, traffic_type in enumerate(TRAFFIC_TYPE_ORDER):
            if pkts[i]:
                counters = self.per_type[traffic_type]
                counters.delivered_pkts += int(pkts[i])
                counters.delivered_bits += int(round(bit_sums[i]))
                counters.sum_delay_ms += float(delay_sums[i])
        self.histogram.add_many(delays_ms)

    @property
    def generated_pkts(self) -> int:
        return sum(c.generated_pkts for c in self.per_type.values())

    @property
    def delivered_pkts(self) -> int:
        return sum(c.delivered_pkts for c in self.per_type.values())

    @property
    def dropped_pkts(self) -> int:
        return sum(c.dropped_pkts for c in self.per_type.values())

    @property
    def delivered_bits(self) -> int:
        return sum(c.delivered_bits for c in self.per_type.values())

    @property
    def sum_delay_ms(self) -> float:
        return sum(c.sum_delay_ms for c in self.per_type.values())
