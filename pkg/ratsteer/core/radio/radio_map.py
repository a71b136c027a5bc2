"""
Vectorised radio state of a deployment.

Holds the static UE x BS gain matrix and evaluates, for one step's RBG
ownership, the per-RBG SINR and the pooled service rate of every cell. The
scalar functions in ``channel`` are the reference; ``link`` builds a
``RadioLink`` that they can evaluate on the same snapshot.
"""

import logging
import math
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ratsteer.models.radio import BaseStation, Rat, RadioLink, UserEquipment
from ratsteer.schemas.scenario import RadioConfig
from .channel import RadioDomainError, db_to_linear, dbm_to_watt, linear_to_db, path_loss_db

logger = logging.getLogger(__name__)


class RadioMap:
    """Gains, interferer sets and per-step SINR/rate evaluation"""

    def __init__(
        self,
        base_stations: Sequence[BaseStation],
        ues: Sequence[UserEquipment],
        radio: RadioConfig,
        rng: np.random.Generator,
    ):
        self.base_stations: List[BaseStation] = list(base_stations)
        self.ues: List[UserEquipment] = list(ues)
        self.noise_psd = dbm_to_watt(radio.noise_psd_dbm_hz)
        if self.noise_psd <= 0:
            raise RadioDomainError(f"noise PSD must be > 0 W/Hz, got {self.noise_psd}")

        self._bs_index: Dict[int, int] = {bs.id: i for i, bs in enumerate(self.base_stations)}
        self.gain = self._build_gains(radio, rng)
        self._co_channel: Dict[int, List[BaseStation]] = {
            bs.id: [other for other in self.base_stations if bs.co_channel(other)]
            for bs in self.base_stations
        }
        self._assign_serving_cells()

    def _build_gains(self, radio: RadioConfig, rng: np.random.Generator) -> np.ndarray:
        gain = np.zeros((len(self.ues), len(self.base_stations)))
        for u, ue in enumerate(self.ues):
            for b, bs in enumerate(self.base_stations):
                distance = max(math.dist(ue.position, bs.position), radio.reference_distance_m)
                loss_db = path_loss_db(
                    distance,
                    bs.carrier_freq,
                    exponent=radio.path_loss_exponent,
                    reference_distance=radio.reference_distance_m,
                )
                if radio.shadowing_enabled:
                    loss_db += rng.normal(0.0, radio.shadowing_std_db)
                gain[u, b] = db_to_linear(-loss_db)
        return gain

    def _assign_serving_cells(self) -> None:
        for ue in self.ues:
            best = {}
            for bs in self.base_stations:
                g = self.gain_between(ue.id, bs.id)
                if bs.rat not in best or g > best[bs.rat][1]:
                    best[bs.rat] = (bs.id, g)
            ue.serving_lte = best[Rat.LTE][0]
            ue.serving_nr = best[Rat.NR][0]

    def bs(self, bs_id: int) -> BaseStation:
        return self.base_stations[self._bs_index[bs_id]]

    def gain_between(self, ue_id: int, bs_id: int) -> float:
        return float(self.gain[ue_id, self._bs_index[bs_id]])

    def interferers_of(self, bs_id: int) -> List[BaseStation]:
        return self._co_channel[bs_id]

    def _activity(self, bs: BaseStation, owners: Mapping[int, np.ndarray]) -> np.ndarray:
        alloc = owners.get(bs.id)
        if alloc is None:
            return np.zeros(bs.num_rbgs, dtype=int)
        return (alloc >= 0).astype(int)

    def interference(self, ue_ids: np.ndarray, bs: BaseStation, owners: Mapping[int, np.ndarray]) -> np.ndarray:
        """Interference power (W) per (ue, RBG of ``bs``) from active co-channel cells"""
        total = np.zeros((len(ue_ids), bs.num_rbgs))
        for other in self._co_channel[bs.id]:
            width = min(bs.num_rbgs, other.num_rbgs)
            active = self._activity(other, owners)[:width]
            g = self.gain[ue_ids, self._bs_index[other.id]]
            total[:, :width] += other.per_rbg_power * np.outer(g, active)
        return total

    def wideband_sinr(self, ue_ids: np.ndarray, bs: BaseStation, owners: Mapping[int, np.ndarray]) -> np.ndarray:
        """SINR (linear) per (ue, RBG) as if each UE held every RBG of ``bs``"""
        ue_ids = np.asarray(ue_ids, dtype=int)
        signal = bs.per_rbg_power * self.gain[ue_ids, self._bs_index[bs.id]]
        noise = bs.per_rbg_bandwidth * self.noise_psd
        return signal[:, None] / (noise + self.interference(ue_ids, bs, owners))

    def cell_rates(self, owners: Mapping[int, np.ndarray]) -> Dict[int, float]:
        """Pooled service rate (bits/s) of every cell: Σ over owned RBGs of ω·log2(1 + sinr)"""
        rates = {}
        for bs in self.base_stations:
            alloc = owners.get(bs.id)
            if alloc is None or not np.any(alloc >= 0):
                rates[bs.id] = 0.0
                continue
            rbgs = np.flatnonzero(alloc >= 0)
            holders = alloc[rbgs]
            sinr = self.wideband_sinr(holders, bs, owners)[np.arange(len(rbgs)), rbgs]
            rates[bs.id] = float(np.sum(bs.per_rbg_bandwidth * np.log2(1.0 + sinr)))
        return rates

    def measured_sinr_db(self, ue_id: int, bs_id: int, owners: Mapping[int, np.ndarray]) -> float:
        """
        SINR report of a UE towards a cell: mean over the RBGs it held in the step,
        or over all RBGs when it held none.
        """
        return float(self.measured_sinr_db_many(np.array([ue_id]), bs_id, owners)[0])

    def measured_sinr_db_many(self, ue_ids: np.ndarray, bs_id: int, owners: Mapping[int, np.ndarray]) -> np.ndarray:
        ue_ids = np.asarray(ue_ids, dtype=int)
        bs = self.bs(bs_id)
        sinr = self.wideband_sinr(ue_ids, bs, owners)
        alloc = owners.get(bs_id)
        if alloc is None:
            alloc = np.full(bs.num_rbgs, -1, dtype=int)
        held = alloc[None, :] == ue_ids[:, None]
        n_held = held.sum(axis=1)
        mean_held = np.where(n_held > 0, (sinr * held).sum(axis=1) / np.maximum(n_held, 1), sinr.mean(axis=1))
        with np.errstate(divide="ignore"):
            return linear_to_db(mean_held)

    def link(self, ue_id: int, bs_id: int, owners: Mapping[int, np.ndarray]) -> RadioLink:
        """Snapshot of link (ue, bs) for the scalar formulas"""
        bs = self.bs(bs_id)
        alloc = owners.get(bs_id)
        indicator = (alloc == ue_id).astype(int) if alloc is not None else np.zeros(bs.num_rbgs, dtype=int)
        interferer_gain = {}
        interferer_alloc = {}
        for other in self._co_channel[bs_id]:
            interferer_gain[other.id] = np.full(other.num_rbgs, self.gain_between(ue_id, other.id))
            interferer_alloc[other.id] = self._activity(other, owners)
        return RadioLink(
            ue=ue_id,
            bs=bs_id,
            channel_gain=np.full(bs.num_rbgs, self.gain_between(ue_id, bs_id)),
            alloc_indicator=indicator,
            noise_psd=self.noise_psd,
            interferer_gain=interferer_gain,
            interferer_alloc=interferer_alloc,
        )

    def serving_pair(self, ue_id: int) -> Tuple[int, int]:
        ue = self.ues[ue_id]
        return ue.serving_lte, ue.serving_nr
