"""Fully connected network with hand-written reverse-mode gradients.

The network maps a ball position (x, y, z) in the table frame to the three
launcher controls that would drop a ball there: azimuth, altitude, and a
single shared wheel actuation.  Hidden layers use the logistic sigmoid, the
output layer is linear, and training-time regularization is inverted dropout
so inference needs no rescaling.
"""

from dataclasses import dataclass

import numpy as np

from ..simcore.types import ALTITUDE_RANGE, AZIMUTH_RANGE

# denormalized output clamp: azimuth, altitude, wheel actuation percent
OUTPUT_RANGES = (AZIMUTH_RANGE, ALTITUDE_RANGE, (0.0, 100.0))

# standard deviations below this are treated as constant columns
_SD_FLOOR = 1e-12


def sigmoid(z):
    # split by sign to avoid overflow in exp for large negative inputs
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class Normalizer:
    """Per-column z-score transform fitted on training data."""

    mean: np.ndarray
    sd: np.ndarray

    @classmethod
    def fit(cls, data: np.ndarray) -> "Normalizer":
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError("normalizer needs a non-empty 2-d array")
        mean = data.mean(axis=0)
        sd = data.std(axis=0)
        sd = np.where(sd < _SD_FLOOR, 1.0, sd)
        return cls(mean=mean, sd=sd)

    def normalize(self, x):
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.sd

    def denormalize(self, x):
        return np.asarray(x, dtype=np.float64) * self.sd + self.mean


def identity_normalizer(dim: int) -> Normalizer:
    return Normalizer(mean=np.zeros(dim), sd=np.ones(dim))


class Mlp:
    """Sigmoid-hidden, linear-output network operating on normalized data.

    Weights are stored one matrix per layer with shape (fan_out, fan_in) so a
    row holds the incoming weights of one unit.  ``forward`` works purely in
    normalized space; ``predict`` wraps it with the stored input and output
    normalizers and clamps the result to the physical control ranges.
    """

    def __init__(self, weights, biases, input_norm=None, output_norm=None):
        if len(weights) != len(biases) or not weights:
            raise ValueError("weights and biases must pair up, one per layer")
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        for w, b in zip(self.weights, self.biases):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise ValueError("layer shape mismatch")
        for prev, nxt in zip(self.weights, self.weights[1:]):
            if nxt.shape[1] != prev.shape[0]:
                raise ValueError("consecutive layers do not chain")
        self.input_norm = input_norm or identity_normalizer(self.weights[0].shape[1])
        self.output_norm = output_norm or identity_normalizer(self.weights[-1].shape[0])

    @property
    def layer_sizes(self):
        return [self.weights[0].shape[1]] + [w.shape[0] for w in self.weights]

    @classmethod
    def create(cls, layer_sizes, rng, input_norm=None, output_norm=None):
        """Glorot-uniform initialization; biases start at zero."""
        if len(layer_sizes) < 2 or any(s < 1 for s in layer_sizes):
            raise ValueError("need at least input and output layer sizes")
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_sizes, layer_sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases, input_norm=input_norm, output_norm=output_norm)

    def forward(self, x, dropout_rate=0.0, rng=None, cache=None):
        """Normalized-space forward pass.

        ``x`` is (n, d_in).  With ``dropout_rate`` > 0 an rng must be given
        and each hidden activation is zeroed with that probability then scaled
        by 1/keep.  Pass a list as ``cache`` to record what ``backward``
        needs.
        """
        a = np.asarray(x, dtype=np.float64)
        if a.ndim != 2 or a.shape[1] != self.weights[0].shape[1]:
            raise ValueError("input must be (n, %d)" % self.weights[0].shape[1])
        if dropout_rate and rng is None:
            raise ValueError("dropout needs an rng")
        last = len(self.weights) - 1
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w.T + b
            if k == last:
                if cache is not None:
                    cache.append((a, None, None))
                return z
            h = sigmoid(z)
            mask = None
            if dropout_rate:
                keep = 1.0 - dropout_rate
                mask = (rng.random(h.shape) < keep) / keep
                out = h * mask
            else:
                out = h
            if cache is not None:
                cache.append((a, h, mask))
            a = out
        raise AssertionError("unreachable")

    def backward(self, cache, grad_out):
        """Gradients of a scalar loss given d(loss)/d(output).

        ``cache`` comes from ``forward``.  Returns [(dW, db), ...] in layer
        order, same shapes as the parameters.
        """
        if len(cache) != len(self.weights):
            raise ValueError("cache does not match network depth")
        grads = [None] * len(self.weights)
        d = np.asarray(grad_out, dtype=np.float64)
        for k in range(len(self.weights) - 1, -1, -1):
            a_in, h, mask = cache[k]
            if h is not None:
                if mask is not None:
                    d = d * mask
                d = d * h * (1.0 - h)  # sigmoid'(z) = h (1 - h)
            grads[k] = (d.T @ a_in, d.sum(axis=0))
            if k > 0:
                d = d @ self.weights[k]
        return grads

    def predict(self, positions):
        """Controls for one position (3,) or a batch (n, 3), clamped to range."""
        pos = np.asarray(positions, dtype=np.float64)
        single = pos.ndim == 1
        if single:
            pos = pos[None, :]
        out = self.forward(self.input_norm.normalize(pos))
        ctl = self.output_norm.denormalize(out)
        for j, (lo, hi) in enumerate(OUTPUT_RANGES[: ctl.shape[1]]):
            ctl[:, j] = np.clip(ctl[:, j], lo, hi)
        return ctl[0] if single else ctl

    def parameter_count(self):
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))
