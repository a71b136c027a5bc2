"""
Reward shaping for the controller (intrinsic) and the meta-controller (extrinsic).

Both QoS ratios are clipped to [0, ratio_clip]; a larger value always means
better service for that flow.
"""

import math
from typing import Sequence

import numpy as np

from ratsteer.models.steering import RewardWeights
from ratsteer.models.traffic import QoSProfile

DEFAULT_RATIO_CLIP = 10.0


class EmptyHistoryError(ValueError):
    """Raised when an extrinsic reward is asked for with no intrinsic rewards"""

    pass


def delay_param(d_actual_ms: float, profile: QoSProfile, clip: float = DEFAULT_RATIO_CLIP) -> float:
    """
    ϖD = D_QoS / D_actual.

    A zero delay maps to ``clip``; an infinite delay (nothing delivered) maps to 0.
    """
    if math.isnan(d_actual_ms) or d_actual_ms < 0:
        raise ValueError(f"Delay must be >= 0 ms, got {d_actual_ms}")
    if d_actual_ms == 0:
        return clip
    return min(profile.d_qos_ms / d_actual_ms, clip)


def throughput_param(t_actual_mbps: float, profile: QoSProfile, clip: float = DEFAULT_RATIO_CLIP) -> float:
    """ϖT = T_actual / T_QoS"""
    if math.isnan(t_actual_mbps) or t_actual_mbps < 0:
        raise ValueError(f"Throughput must be >= 0 Mbps, got {t_actual_mbps}")
    return min(t_actual_mbps / profile.t_qos_mbps, clip)


def intrinsic_reward(
    delay_ratio: float,
    throughput_ratio: float,
    handover: bool,
    weights: RewardWeights = RewardWeights(),
) -> float:
    """r_in = c1·ϖD + c2·ϖT − H·[handover]"""
    penalty = weights.handover_penalty if handover else 0.0
    return weights.c1 * delay_ratio + weights.c2 * throughput_ratio - penalty


def extrinsic_reward(intrinsic_history: Sequence[float]) -> float:
    """
    Mean of the controller's intrinsic rewards over one meta period.

    Raises:
        EmptyHistoryError: If the history is empty
    """
    values = np.asarray(intrinsic_history, dtype=float).ravel()
    if values.size == 0:
        raise EmptyHistoryError("Extrinsic reward needs at least one intrinsic reward")
    return float(np.mean(values))
