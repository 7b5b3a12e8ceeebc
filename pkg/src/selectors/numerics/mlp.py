from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .losses import masked_mse


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_grad(z: np.ndarray) -> np.ndarray:
    return np.where(z > 0, 1.0, 0.0)


def he_init(rng: np.random.Generator, fan_in: int, fan_out: int) -> Tuple[np.ndarray, np.ndarray]:
    W = rng.normal(0.0, np.sqrt(2.0 / max(fan_in, 1)), size=(fan_in, fan_out))
    return W, np.zeros(fan_out)


@dataclass
class MLPCache:
    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]


class MLP:
    """
    Fully-connected ReLU network with a linear output layer.

    Parameters live in a flat list [W1, b1, W2, b2, ...] so optimizers and the
    gradient checker can treat every network the same way.
    """

    def __init__(self, sizes: Sequence[int], seed: int = 0, rng: np.random.Generator = None):
        if len(sizes) < 2:
            raise ValueError("an MLP needs at least input and output sizes")
        self.sizes = [int(s) for s in sizes]
        rng = rng if rng is not None else np.random.default_rng(seed)
        self.params: List[np.ndarray] = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            W, b = he_init(rng, fan_in, fan_out)
            self.params.extend([W, b])

    @property
    def n_layers(self) -> int:
        return len(self.params) // 2

    def forward(self, X: np.ndarray, params: List[np.ndarray] = None) -> Tuple[np.ndarray, MLPCache]:
        params = self.params if params is None else params
        a = np.asarray(X, dtype=np.float64)
        cache = MLPCache(inputs=[], pre_activations=[])
        for layer in range(self.n_layers):
            W, b = params[2 * layer], params[2 * layer + 1]
            cache.inputs.append(a)
            z = a @ W + b
            cache.pre_activations.append(z)
            a = relu(z) if layer < self.n_layers - 1 else z
        return a, cache

    def backward(self, dout: np.ndarray, cache: MLPCache,
                 params: List[np.ndarray] = None) -> Tuple[List[np.ndarray], np.ndarray]:
        """Return (parameter gradients, gradient w.r.t. the input)."""
        params = self.params if params is None else params
        grads: List[np.ndarray] = [None] * len(params)
        delta = dout
        for layer in reversed(range(self.n_layers)):
            if layer < self.n_layers - 1:
                delta = delta * relu_grad(cache.pre_activations[layer])
            W = params[2 * layer]
            grads[2 * layer] = cache.inputs[layer].T @ delta
            grads[2 * layer + 1] = delta.sum(axis=0)
            delta = delta @ W.T
        return grads, delta

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.forward(X)[0]

    def state(self, prefix: str) -> dict:
        return {f"{prefix}.{i}": p for i, p in enumerate(self.params)}

    @classmethod
    def from_state(cls, state: dict, prefix: str) -> "MLP":
        params = []
        i = 0
        while f"{prefix}.{i}" in state:
            params.append(np.asarray(state[f"{prefix}.{i}"], dtype=np.float64))
            i += 1
        if not params or len(params) % 2:
            raise ValueError(f"no complete MLP stored under {prefix!r}")
        mlp = cls.__new__(cls)
        mlp.sizes = [params[0].shape[0]] + [params[k].shape[1] for k in range(0, len(params), 2)]
        mlp.params = params
        return mlp


def mse_objective(mlp: MLP, X: np.ndarray, Y: np.ndarray, mask: np.ndarray):
    """Closure returning (masked MSE, parameter gradients) for a parameter list."""

    def loss_and_grads(params: List[np.ndarray]):
        out, cache = mlp.forward(X, params)
        loss, dout = masked_mse(out, Y, mask)
        grads, _ = mlp.backward(dout, cache, params)
        return loss, grads

    return loss_and_grads
