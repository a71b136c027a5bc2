"""
Numpy multilayer perceptron used as a Q-function.

Layers: input -> ReLU hidden layers -> linear output (one value per choice).
Weights are stored as (fan_in, fan_out) so a batch forward is X @ W + b.
The training loss is (1/2B)·Σ(y − Q(s, a))² over the batch, which makes one
SGD step on a one-hot, bias-free, single-layer net equal to the tabular
update Q ← Q + α(y − Q).
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .replay import TransitionBatch

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "ratsteer.valuenet"
CHECKPOINT_VERSION = 1


class DimensionMismatchError(ValueError):
    """Raised when an input row does not match the network's input size"""

    pass


class InvalidBatchError(ValueError):
    """Raised for empty batches or batches containing NaN"""

    pass


class CheckpointFormatError(ValueError):
    """Raised when a checkpoint has an unknown format, version or layout"""

    pass


class ValueNet:
    """Main and target weight sets with SGD on the squared TD error"""

    def __init__(
        self,
        input_size: int,
        output_size: int,
        hidden_layers: Sequence[int] = (64, 64),
        learning_rate: float = 1e-3,
        discount: float = 0.9,
        use_bias: bool = True,
        target_sync_updates: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        if input_size < 1 or output_size < 1:
            raise ValueError(f"Layer sizes must be >= 1, got input={input_size}, output={output_size}")
        self.input_size = input_size
        self.output_size = output_size
        self.hidden_layers = list(hidden_layers)
        self.learning_rate = learning_rate
        self.discount = discount
        self.use_bias = use_bias
        self.target_sync_updates = target_sync_updates
        self.updates = 0

        rng = rng if rng is not None else np.random.default_rng(0)
        sizes = [input_size, *self.hidden_layers, output_size]
        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = 1.0 / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            if use_bias:
                self.biases.append(rng.uniform(-bound, bound, size=fan_out))
            else:
                self.biases.append(np.zeros(fan_out))
        self.target_weights = [w.copy() for w in self.weights]
        self.target_biases = [b.copy() for b in self.biases]

    @property
    def layer_sizes(self) -> List[int]:
        return [self.input_size, *self.hidden_layers, self.output_size]

    def _as_batch(self, states) -> Tuple[np.ndarray, bool]:
        x = np.asarray(states, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.ndim != 2 or x.shape[1] != self.input_size:
            raise DimensionMismatchError(
                f"Expected input rows of length {self.input_size}, got shape {np.shape(states)}"
            )
        return x, single

    @staticmethod
    def _activations(x: np.ndarray, weights: List[np.ndarray], biases: List[np.ndarray]) -> List[np.ndarray]:
        """Layer outputs, input first; hidden layers are ReLU, the last is linear"""
        outputs = [x]
        for i, (w, b) in enumerate(zip(weights, biases)):
            z = outputs[-1] @ w + b
            outputs.append(z if i == len(weights) - 1 else np.maximum(z, 0.0))
        return outputs

    def forward(self, states, use_target: bool = False) -> np.ndarray:
        """
        Q-values for one state (1-D input) or a batch (2-D input).

        Raises:
            DimensionMismatchError: If the feature length differs from the input size
        """
        x, single = self._as_batch(states)
        weights = self.target_weights if use_target else self.weights
        biases = self.target_biases if use_target else self.biases
        q = self._activations(x, weights, biases)[-1]
        return q[0] if single else q

    def loss_and_gradients(
        self,
        states: np.ndarray,
        actions: np.ndarray,
        targets: np.ndarray,
    ) -> Tuple[float, List[np.ndarray], List[np.ndarray]]:
        """
        Loss (1/2B)·Σ(y − Q(s, a))² and its gradients w.r.t. the main weights.

        Returns:
            (loss, weight gradients, bias gradients); bias gradients are zero
            when the net has no biases
        """
        x, _ = self._as_batch(states)
        actions = np.asarray(actions, dtype=int)
        targets = np.asarray(targets, dtype=float)
        batch = len(x)
        rows = np.arange(batch)

        outputs = self._activations(x, self.weights, self.biases)
        q = outputs[-1]
        error = q[rows, actions] - targets
        loss = float(np.sum(error ** 2) / (2 * batch))

        delta = np.zeros_like(q)
        delta[rows, actions] = error / batch
        grad_w: List[np.ndarray] = [None] * len(self.weights)
        grad_b: List[np.ndarray] = [None] * len(self.biases)
        for layer in range(len(self.weights) - 1, -1, -1):
            grad_w[layer] = outputs[layer].T @ delta
            grad_b[layer] = delta.sum(axis=0) if self.use_bias else np.zeros_like(self.biases[layer])
            if layer > 0:
                delta = (delta @ self.weights[layer].T) * (outputs[layer] > 0)
        return loss, grad_w, grad_b

    def td_targets(self, batch: TransitionBatch) -> np.ndarray:
        """y = r + γ·max_a′ Q(s′, a′; θ′), and y = r at terminal transitions"""
        next_q = self.forward(batch.next_states, use_target=True).max(axis=1)
        return batch.rewards + self.discount * next_q * (~np.asarray(batch.terminals, dtype=bool))

    def td_update(self, batch: TransitionBatch) -> float:
        """
        One SGD step on the squared TD error of ``batch``.

        Returns:
            Loss before the step

        Raises:
            InvalidBatchError: If the batch is empty or holds NaN
        """
        if len(batch.actions) == 0:
            raise InvalidBatchError("TD update needs a non-empty batch")
        for name in ("states", "rewards", "next_states"):
            if np.isnan(np.asarray(getattr(batch, name), dtype=float)).any():
                raise InvalidBatchError(f"TD batch contains NaN in {name}")
        if np.any((batch.actions < 0) | (batch.actions >= self.output_size)):
            raise InvalidBatchError(f"TD batch actions must be in [0, {self.output_size})")

        targets = self.td_targets(batch)
        loss, grad_w, grad_b = self.loss_and_gradients(batch.states, batch.actions, targets)
        for layer in range(len(self.weights)):
            self.weights[layer] -= self.learning_rate * grad_w[layer]
            if self.use_bias:
                self.biases[layer] -= self.learning_rate * grad_b[layer]

        self.updates += 1
        if self.target_sync_updates and self.updates % self.target_sync_updates == 0:
            self.sync_target()
        return loss

    def sync_target(self) -> None:
        """θ′ := θ"""
        self.target_weights = [w.copy() for w in self.weights]
        self.target_biases = [b.copy() for b in self.biases]
        logger.debug(f"Target weights synced after {self.updates} updates")

    def get_weights(self) -> Dict[str, List[np.ndarray]]:
        return {
            "weights": [w.copy() for w in self.weights],
            "biases": [b.copy() for b in self.biases],
            "target_weights": [w.copy() for w in self.target_weights],
            "target_biases": [b.copy() for b in self.target_biases],
        }

    def set_weights(self, params: Dict[str, Sequence]) -> None:
        """Replace weight sets; missing target entries are left untouched"""
        for key in ("weights", "biases", "target_weights", "target_biases"):
            if key not in params:
                continue
            current = getattr(self, key)
            arrays = [np.array(a, dtype=float) for a in params[key]]
            if len(arrays) != len(current) or any(a.shape != c.shape for a, c in zip(arrays, current)):
                raise DimensionMismatchError(
                    f"{key}: expected shapes {[c.shape for c in current]}, got {[a.shape for a in arrays]}"
                )
            setattr(self, key, arrays)

    def to_dict(self) -> Dict:
        return {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "layer_sizes": self.layer_sizes,
            "use_bias": self.use_bias,
            "learning_rate": self.learning_rate,
            "discount": self.discount,
            "target_sync_updates": self.target_sync_updates,
            "updates": self.updates,
            **{key: [a.tolist() for a in arrays] for key, arrays in self.get_weights().items()},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ValueNet":
        if data.get("format") != CHECKPOINT_FORMAT:
            raise CheckpointFormatError(f"Unknown checkpoint format: {data.get('format')!r}")
        if data.get("version") != CHECKPOINT_VERSION:
            raise CheckpointFormatError(f"Unsupported checkpoint version: {data.get('version')!r}")
        try:
            sizes = data["layer_sizes"]
            net = cls(
                input_size=sizes[0],
                output_size=sizes[-1],
                hidden_layers=sizes[1:-1],
                learning_rate=data["learning_rate"],
                discount=data["discount"],
                use_bias=data["use_bias"],
                target_sync_updates=data.get("target_sync_updates"),
            )
            net.set_weights({key: data[key] for key in ("weights", "biases", "target_weights", "target_biases")})
            net.updates = int(data.get("updates", 0))
        except (KeyError, IndexError, TypeError, DimensionMismatchError) as e:
            raise CheckpointFormatError(f"Malformed checkpoint: {e}") from e
        return net

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict()))
        logger.info(f"Saved value network to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ValueNet":
        """
        Raises:
            CheckpointFormatError: If the file is not a ValueNet checkpoint
        """
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise CheckpointFormatError(f"Checkpoint {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise CheckpointFormatError(f"Checkpoint {path} must hold a JSON object")
        return cls.from_dict(data)
