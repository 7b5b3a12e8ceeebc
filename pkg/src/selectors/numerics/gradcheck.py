from typing import List

import numpy as np

from .trainer import LossFn


def gradient_check(loss_and_grads: LossFn, params: List[np.ndarray], step: float = 1e-5,
                   threshold: float = 1e-6) -> float:
    """
    Maximum relative error between analytic and central-difference gradients,
    over entries whose analytic gradient exceeds `threshold` in magnitude.
    Parameters are restored before returning.
    """
    _, analytic = loss_and_grads(params)
    worst = 0.0
    for p, g in zip(params, analytic):
        flat = p.reshape(-1)
        flat_g = np.asarray(g).reshape(-1)
        for idx in range(flat.size):
            if abs(flat_g[idx]) <= threshold:
                continue
            original = flat[idx]
            flat[idx] = original + step
            plus, _ = loss_and_grads(params)
            flat[idx] = original - step
            minus, _ = loss_and_grads(params)
            flat[idx] = original
            numeric = (plus - minus) / (2.0 * step)
            denom = max(abs(flat_g[idx]), abs(numeric))
            worst = max(worst, abs(flat_g[idx] - numeric) / denom)
    return worst
