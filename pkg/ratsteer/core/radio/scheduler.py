"""Round-robin RBG scheduler"""

from typing import Dict, Sequence

import numpy as np

from ratsteer.models.radio import BaseStation


class RoundRobinScheduler:
    """Assigns each RBG of a cell to one backlogged UE, cycling over steps.

    Owner arrays hold UE ids, -1 for an idle RBG. At most one UE holds an RBG.
    """

    def __init__(self, base_stations: Sequence[BaseStation]):
        self._offsets: Dict[int, int] = {bs.id: 0 for bs in base_stations}

    def allocate(self, bs: BaseStation, active_ues: Sequence[int]) -> np.ndarray:
        owners = np.full(bs.num_rbgs, -1, dtype=int)
        n = len(active_ues)
        if n == 0:
            return owners
        offset = self._offsets[bs.id]
        for rbg in range(bs.num_rbgs):
            owners[rbg] = active_ues[(offset + rbg) % n]
        self._offsets[bs.id] = (offset + bs.num_rbgs) % n
        return owners

    def reset(self) -> None:
        for bs_id in self._offsets:
            self._offsets[bs_id] = 0
