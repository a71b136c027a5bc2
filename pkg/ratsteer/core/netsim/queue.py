"""Per-BS FIFO transmission queue with tail drop"""

import logging
from collections import Counter, deque
from typing import Deque, List

from ratsteer.models.traffic import Packet

logger = logging.getLogger(__name__)


class RatQueue:
    """FIFO shared by every flow bound to one BS.

    A packet that does not fit is dropped (tail drop). Service carries the
    partially sent head packet over to the next step.
    """

    def __init__(self, bs_id: int, capacity_pkts: int):
        if capacity_pkts < 1:
            raise ValueError(f"Queue capacity must be >= 1, got {capacity_pkts}")
        self.bs_id = bs_id
        self.capacity_pkts = capacity_pkts
        self._fifo: Deque[Packet] = deque()
        self._backlog: Counter = Counter()
        self.dropped_pkts = 0

    def __len__(self) -> int:
        return len(self._fifo)

    @property
    def occupancy(self) -> float:
        """Q_l in [0, 1]"""
        return len(self._fifo) / self.capacity_pkts

    @property
    def full(self) -> bool:
        return len(self._fifo) >= self.capacity_pkts

    def backlogged_ues(self) -> List[int]:
        """UE ids with at least one queued packet, ascending"""
        return sorted(ue for ue, n in self._backlog.items() if n > 0)

    def packets(self) -> List[Packet]:
        return list(self._fifo)

    @property
    def free_slots(self) -> int:
        return self.capacity_pkts - len(self._fifo)

    def enqueue(self, pkt: Packet) -> bool:
        """Append ``pkt``; returns False (and counts a drop) when the queue is full"""
        if self.full:
            self.dropped_pkts += 1
            return False
        self._fifo.append(pkt)
        self._backlog[pkt.ue_id] += 1
        return True

    def enqueue_many(self, packets: List[Packet]) -> int:
        """Append as many of ``packets`` as fit; the rest count as drops. Returns how many were accepted."""
        accepted = packets[: self.free_slots]
        self._fifo.extend(accepted)
        self._backlog.update(pkt.ue_id for pkt in accepted)
        self.dropped_pkts += len(packets) - len(accepted)
        return len(accepted)

    def serve_step(self, available_bits: float, now: int = 0) -> List[Packet]:
        """
        Transmit up to ``available_bits`` from the head of the queue.

        Whole packets leave while the budget covers their remaining bits; the
        rest of the budget is spent on the next head packet, which keeps the
        residue for the next step. Budget left over with an empty queue is lost.
        """
        if available_bits < 0:
            raise ValueError(f"available_bits must be >= 0, got {available_bits}")

        budget = available_bits
        delivered = []
        while self._fifo and budget > 0:
            head = self._fifo[0]
            if head.service_start is None:
                head.service_start = now
            remaining = head.bits - head.sent_bits
            if budget >= remaining:
                budget -= remaining
                head.sent_bits = head.bits
                head.depart_time = now
                self._fifo.popleft()
                self._backlog[head.ue_id] -= 1
                delivered.append(head)
            else:
                head.sent_bits += budget
                budget = 0
        return delivered

    def clear(self) -> int:
        """Empty the queue, returning how many packets were discarded"""
        discarded = len(self._fifo)
        self._fifo.clear()
        self._backlog.clear()
        return discarded
