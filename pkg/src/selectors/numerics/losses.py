from typing import Tuple

import numpy as np


def masked_mse(pred: np.ndarray, target: np.ndarray, mask: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean squared error over observed entries, with its gradient w.r.t. `pred`."""
    w = np.asarray(mask, dtype=np.float64)
    count = max(w.sum(), 1.0)
    diff = w * (pred - np.where(w > 0, target, 0.0))
    return float((diff ** 2).sum() / count), 2.0 * diff / count


def masked_softmax(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Row softmax restricted to observed entries; unobserved entries get 0."""
    shifted = np.where(mask, scores, -np.inf)
    row_max = shifted.max(axis=1, keepdims=True)
    row_max = np.where(np.isfinite(row_max), row_max, 0.0)
    e = np.where(mask, np.exp(np.where(mask, scores - row_max, 0.0)), 0.0)
    totals = e.sum(axis=1, keepdims=True)
    return np.divide(e, totals, out=np.zeros_like(e), where=totals > 0)


def listwise_top1(scores: np.ndarray, target: np.ndarray, mask: np.ndarray,
                  temperature: float = 1.0) -> Tuple[float, np.ndarray]:
    """
    Top-one probability cross-entropy between softmax(target / T) and softmax(scores),
    averaged over rows that have at least one observed entry.
    """
    mask = np.asarray(mask, dtype=bool)
    p_true = masked_softmax(np.where(mask, target, 0.0) / temperature, mask)
    p_pred = masked_softmax(scores, mask)
    rows = max(int(mask.any(axis=1).sum()), 1)
    log_pred = np.log(np.where(mask, p_pred, 1.0) + 1e-300)
    loss = float(-(p_true * log_pred).sum() / rows)
    grad = (p_pred - p_true) / rows
    return loss, np.where(mask, grad, 0.0)
