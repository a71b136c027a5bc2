"""Central finite-difference check of ValueNet gradients"""

from typing import List, Tuple

import numpy as np

from .value_net import ValueNet


def numerical_gradients(
    net: ValueNet,
    states: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    h: float = 1e-6,
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """(L(θ + h) − L(θ − h)) / 2h for every weight and bias entry"""

    def loss() -> float:
        return net.loss_and_gradients(states, actions, targets)[0]

    grads = []
    for params in (net.weights, net.biases):
        layer_grads = []
        for p in params:
            g = np.zeros_like(p)
            for idx in np.ndindex(p.shape):
                original = p[idx]
                p[idx] = original + h
                plus = loss()
                p[idx] = original - h
                minus = loss()
                p[idx] = original
                g[idx] = (plus - minus) / (2 * h)
            layer_grads.append(g)
        grads.append(layer_grads)
    return grads[0], grads[1]


def max_relative_error(analytic: List[np.ndarray], numeric: List[np.ndarray], floor: float = 1e-12) -> float:
    """Worst per-layer ||a − n|| / (||a|| + ||n||)"""
    worst = 0.0
    for a, n in zip(analytic, numeric):
        scale = max(float(np.linalg.norm(a) + np.linalg.norm(n)), floor)
        worst = max(worst, float(np.linalg.norm(a - n)) / scale)
    return worst
