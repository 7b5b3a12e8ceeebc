from typing import List

import numpy as np


class Optimizer:
    def __init__(self, lr: float, weight_decay: float = 0.0):
        self.lr = lr
        self.weight_decay = weight_decay

    def _decayed(self, params: List[np.ndarray], grads: List[np.ndarray]) -> List[np.ndarray]:
        if not self.weight_decay:
            return grads
        return [g + self.weight_decay * p for p, g in zip(params, grads)]

    def step(self, params: List[np.ndarray], grads: List[np.ndarray]) -> None:
        raise NotImplementedError


class SGD(Optimizer):
    """Plain SGD with heavy-ball momentum."""

    def __init__(self, lr: float = 0.01, momentum: float = 0.9, weight_decay: float = 0.0):
        super().__init__(lr, weight_decay)
        self.momentum = momentum
        self._velocity = None

    def step(self, params, grads):
        grads = self._decayed(params, grads)
        if self._velocity is None:
            self._velocity = [np.zeros_like(p) for p in params]
        for p, g, v in zip(params, grads, self._velocity):
            v *= self.momentum
            v -= self.lr * g
            p += v


class Adam(Optimizer):
    def __init__(self, lr: float = 0.01, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8, weight_decay: float = 0.0):
        super().__init__(lr, weight_decay)
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self._m = self._v = None
        self._t = 0

    def step(self, params, grads):
        grads = self._decayed(params, grads)
        if self._m is None:
            self._m = [np.zeros_like(p) for p in params]
            self._v = [np.zeros_like(p) for p in params]
        self._t += 1
        c1 = 1.0 - self.beta1 ** self._t
        c2 = 1.0 - self.beta2 ** self._t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def make_optimizer(config: dict) -> Optimizer:
    name = config.get("optimizer", "adam")
    lr = float(config.get("lr", 0.01))
    weight_decay = float(config.get("weight_decay", 0.0))
    if name == "sgd":
        return SGD(lr=lr, momentum=float(config.get("momentum", 0.9)), weight_decay=weight_decay)
    if name == "adam":
        return Adam(lr=lr, weight_decay=weight_decay)
    raise ValueError(f"unknown optimizer {name!r}")
