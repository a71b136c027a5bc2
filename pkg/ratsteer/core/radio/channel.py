"""
Scalar radio formulas.

- Log-distance path loss anchored on free space at the reference distance
- Per-RBG SINR with co-channel interference
- Shannon link capacity summed over RBGs
- Link constraint: bound flow demand must fit the link capacity
"""

import logging
import math
from typing import Iterable

import numpy as np

from ratsteer.models.radio import BaseStation, RadioLink
from ratsteer.models.traffic import TrafficFlow

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class RadioDomainError(ValueError):
    """Raised for physically meaningless radio inputs"""

    pass


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(linear):
    return 10.0 * np.log10(linear)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def path_loss_db(
    distance: float,
    carrier_freq: float,
    exponent: float = 3.5,
    reference_distance: float = 1.0,
) -> float:
    """
    Log-distance path loss.

    PL(d) = PL_fs(d0) + 10·n·log10(d/d0), with PL_fs(d0) = 20·log10(4π·d0·f/c).

    Args:
        distance: UE-BS distance in meters
        carrier_freq: Carrier frequency in Hz
        exponent: Path loss exponent n
        reference_distance: d0 in meters

    Returns:
        Path loss in dB

    Raises:
        RadioDomainError: If distance or frequency is not positive
    """
    if not distance > 0:
        raise RadioDomainError(f"distance must be > 0 m, got {distance}")
    if not carrier_freq > 0:
        raise RadioDomainError(f"carrier frequency must be > 0 Hz, got {carrier_freq}")
    if not reference_distance > 0:
        raise RadioDomainError(f"reference distance must be > 0 m, got {reference_distance}")

    reference_loss = 20.0 * math.log10(4.0 * math.pi * reference_distance * carrier_freq / SPEED_OF_LIGHT)
    return reference_loss + 10.0 * exponent * math.log10(distance / reference_distance)


def _interference(link: RadioLink, rbg: int, serving: BaseStation, interferers: Iterable[BaseStation]) -> float:
    total = 0.0
    for bs in interferers:
        if bs.id == serving.id or bs.id not in link.interferer_gain:
            continue
        if rbg >= bs.num_rbgs:
            continue
        alloc = link.interferer_alloc.get(bs.id)
        if alloc is None or not alloc[rbg]:
            continue
        total += bs.per_rbg_power * alloc[rbg] * link.interferer_gain[bs.id][rbg]
    return total


def compute_sinr(link: RadioLink, rbg: int, serving: BaseStation, interferers: Iterable[BaseStation]) -> float:
    """
    SINR of one RBG of a link.

    sinr = ρ·ζ·g / (ω·X0 + Σ_μ ρ_μ·ζ_μ·g_μ); the serving BS never counts as an
    interferer and BSs without gain entries on the link are not heard.
    """
    if not 0 <= rbg < link.num_rbgs:
        raise IndexError(f"RBG {rbg} out of range for link with {link.num_rbgs} RBGs")
    if link.noise_psd <= 0:
        raise RadioDomainError(f"noise PSD must be > 0 W/Hz, got {link.noise_psd}")

    signal = serving.per_rbg_power * link.alloc_indicator[rbg] * link.channel_gain[rbg]
    if signal == 0:
        return 0.0
    noise = serving.per_rbg_bandwidth * link.noise_psd
    return float(signal / (noise + _interference(link, rbg, serving, interferers)))


def link_capacity(link: RadioLink, serving: BaseStation, all_bs: Iterable[BaseStation]) -> float:
    """
    Shannon capacity of a link in bits/s: Σ_ψ ω_ψ·log2(1 + sinr_ψ).

    Fills ``link.sinr`` and ``link.capacity`` as a side effect.
    """
    all_bs = list(all_bs)
    sinr = np.array([compute_sinr(link, rbg, serving, all_bs) for rbg in range(link.num_rbgs)])
    capacity = float(np.sum(serving.per_rbg_bandwidth * np.log2(1.0 + sinr)))
    link.sinr = sinr
    link.capacity = capacity
    return capacity


def check_link_constraint(
    flows: Iterable[TrafficFlow],
    link_capacity: float,
    ue_id: int,
    bs_id: int,
) -> bool:
    """True iff Σ δ_φ·v_{u,b}^φ ≤ ξ_{u,b} (boundary inclusive)"""
    demand = math.fsum(flow.demand_bps * flow.binding(ue_id, bs_id) for flow in flows)
    return demand <= link_capacity
