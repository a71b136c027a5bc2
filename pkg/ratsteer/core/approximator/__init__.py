"""Feedforward value networks with target weights, replay memory and gradient checks"""

from .value_net import (
    ValueNet,
    DimensionMismatchError,
    InvalidBatchError,
    CheckpointFormatError,
    CHECKPOINT_FORMAT,
    CHECKPOINT_VERSION,
)
from .replay import ReplayBuffer, TransitionBatch
from .gradcheck import numerical_gradients, max_relative_error

__all__ = [
    "ValueNet",
    "DimensionMismatchError",
    "InvalidBatchError",
    "CheckpointFormatError",
    "CHECKPOINT_FORMAT",
    "CHECKPOINT_VERSION",
    "ReplayBuffer",
    "TransitionBatch",
    "numerical_gradients",
    "max_relative_error",
]
