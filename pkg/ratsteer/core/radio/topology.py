"""Deployment geometry: one macro eNB with gNB small cells on a ring"""

import logging
import math
from typing import List

import numpy as np

from ratsteer.models.radio import BaseStation, Rat, UserEquipment
from ratsteer.schemas.scenario import RadioConfig, TopologyConfig

logger = logging.getLogger(__name__)

MACRO_BS_ID = 0


def build_base_stations(topology: TopologyConfig, radio: RadioConfig) -> List[BaseStation]:
    """eNB at the origin (id 0), gNBs at ``small_cell_offset_m`` with even angular spacing"""
    lte, nr = radio.lte, radio.nr
    stations = [
        BaseStation(
            id=MACRO_BS_ID,
            rat=Rat.LTE,
            position=(0.0, 0.0),
            tx_power_total=lte.tx_power_w,
            carrier_freq=lte.carrier_freq_mhz * 1e6,
            bandwidth=lte.bandwidth_mhz * 1e6,
            num_rbgs=lte.num_rbgs,
        )
    ]
    for i in range(topology.small_cell_count):
        angle = 2.0 * math.pi * i / topology.small_cell_count
        stations.append(
            BaseStation(
                id=i + 1,
                rat=Rat.NR,
                position=(
                    topology.small_cell_offset_m * math.cos(angle),
                    topology.small_cell_offset_m * math.sin(angle),
                ),
                tx_power_total=nr.tx_power_w,
                carrier_freq=nr.carrier_freq_mhz * 1e6,
                bandwidth=nr.bandwidth_mhz * 1e6,
                num_rbgs=nr.num_rbgs,
            )
        )
    return stations


def place_ues(
    topology: TopologyConfig,
    base_stations: List[BaseStation],
    rng: np.random.Generator,
) -> List[UserEquipment]:
    """
    Drop UEs uniformly by area inside the small-cell disks, round-robin over cells.

    Serving cells are filled in later by the radio map (strongest gNB, the eNB).
    """
    small_cells = [bs for bs in base_stations if bs.rat is Rat.NR]
    macro = next(bs for bs in base_stations if bs.rat is Rat.LTE)
    ues = []
    for ue_id in range(topology.ue_count):
        cell = small_cells[ue_id % len(small_cells)]
        radius = topology.small_cell_radius_m * math.sqrt(rng.random())
        angle = 2.0 * math.pi * rng.random()
        position = (
            cell.position[0] + radius * math.cos(angle),
            cell.position[1] + radius * math.sin(angle),
        )
        ues.append(UserEquipment(id=ue_id, position=position, serving_lte=macro.id, serving_nr=cell.id))

    logger.debug(f"Placed {len(ues)} UEs over {len(small_cells)} small cells")
    return ues
