"""Radio-side domain types: base stations, UEs and (UE, BS) links"""

import enum
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np


class Rat(str, enum.Enum):
    """Radio access technology"""
    LTE = "lte"
    NR = "nr"

    @property
    def other(self) -> "Rat":
        return Rat.NR if self is Rat.LTE else Rat.LTE


@dataclass(frozen=True)
class BaseStation:
    """An eNB (LTE) or gNB (NR) with an equal power split over its RBGs"""

    id: int
    rat: Rat
    position: Tuple[float, float]
    tx_power_total: float  # W
    carrier_freq: float  # Hz
    bandwidth: float  # Hz
    num_rbgs: int

    def __post_init__(self):
        if self.num_rbgs < 1:
            raise ValueError(f"BS {self.id}: num_rbgs must be >= 1, got {self.num_rbgs}")
        if self.tx_power_total < 0:
            raise ValueError(f"BS {self.id}: tx_power_total must be >= 0, got {self.tx_power_total}")
        if self.carrier_freq <= 0 or self.bandwidth <= 0:
            raise ValueError(f"BS {self.id}: carrier_freq and bandwidth must be positive")

    @property
    def per_rbg_power(self) -> float:
        """ρ_{ψ,b} in W"""
        return self.tx_power_total / self.num_rbgs

    @property
    def per_rbg_bandwidth(self) -> float:
        """ω_ψ in Hz"""
        return self.bandwidth / self.num_rbgs

    def rbg_powers(self) -> np.ndarray:
        return np.full(self.num_rbgs, self.per_rbg_power)

    def co_channel(self, other: "BaseStation") -> bool:
        """True when both cells transmit on the same carrier"""
        return self.id != other.id and self.carrier_freq == other.carrier_freq


@dataclass
class UserEquipment:
    """A dual-connected UE: exactly one LTE and one NR serving cell"""

    id: int
    position: Tuple[float, float]
    serving_lte: int
    serving_nr: int

    def serving(self, rat: Rat) -> int:
        return self.serving_lte if rat is Rat.LTE else self.serving_nr


@dataclass
class RadioLink:
    """Channel state of one (UE, BS) pair for a single step.

    Interferer terms are keyed by BS id. ``interferer_alloc[mu][psi]`` is 1 when
    BS ``mu`` transmits on RBG ``psi`` in this step.
    """

    ue: int
    bs: int
    channel_gain: np.ndarray
    alloc_indicator: np.ndarray
    noise_psd: float  # W/Hz
    interferer_gain: Dict[int, np.ndarray] = field(default_factory=dict)
    interferer_alloc: Dict[int, np.ndarray] = field(default_factory=dict)
    sinr: Optional[np.ndarray] = None
    capacity: Optional[float] = None

    def __post_init__(self):
        self.channel_gain = np.asarray(self.channel_gain, dtype=float)
        self.alloc_indicator = np.asarray(self.alloc_indicator, dtype=int)
        if self.channel_gain.shape != self.alloc_indicator.shape:
            raise ValueError(
                f"Link ({self.ue}, {self.bs}): gain and allocation lengths differ "
                f"({self.channel_gain.shape} vs {self.alloc_indicator.shape})"
            )
        if np.any((self.alloc_indicator != 0) & (self.alloc_indicator != 1)):
            raise ValueError(f"Link ({self.ue}, {self.bs}): allocation indicator must be binary")
        if np.any(self.channel_gain < 0):
            raise ValueError(f"Link ({self.ue}, {self.bs}): channel gains must be nonnegative")

    @property
    def num_rbgs(self) -> int:
        return len(self.channel_gain)
