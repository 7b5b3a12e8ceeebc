"""
Masked non-negative matrix factorization with Lee-Seung multiplicative updates.

Only observed entries (mask == True) enter the Frobenius objective; the updates
keep U and V non-negative and do not increase the masked objective.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

logger = logging.getLogger(__name__)

EPS = 1e-12


@dataclass(frozen=True)
class NMFResult:
    U: np.ndarray
    V: np.ndarray
    objective_history: List[float]

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.V.T


def masked_frobenius(X: np.ndarray, mask: np.ndarray, U: np.ndarray, V: np.ndarray) -> float:
    return float((mask * np.square(X - U @ V.T)).sum())


def masked_nmf(X: np.ndarray, mask: np.ndarray, rank: int, seed: int,
               max_iter: int = 500, tol: float = 1e-10) -> NMFResult:
    """Factorize X ~ U V^T on observed entries. X must be non-negative where observed."""
    W = np.asarray(mask, dtype=np.float64)
    X = np.where(W > 0, np.asarray(X, dtype=np.float64), 0.0)
    if np.any(X < 0):
        raise ValueError("masked NMF requires non-negative observed entries")
    n, m = X.shape
    rng = np.random.default_rng(seed)
    observed_mean = X.sum() / max(W.sum(), 1.0)
    scale = np.sqrt(max(observed_mean, EPS) / rank)
    U = rng.uniform(1e-8, scale, size=(n, rank))
    V = rng.uniform(1e-8, scale, size=(m, rank))

    WX = W * X
    history = [masked_frobenius(X, W, U, V)]
    for it in range(max_iter):
        U *= (WX @ V) / ((W * (U @ V.T)) @ V + EPS)
        V *= (WX.T @ U) / ((W * (U @ V.T)).T @ U + EPS)
        history.append(masked_frobenius(X, W, U, V))
        if history[-2] - history[-1] <= tol * max(history[-2], 1.0):
            break
    logger.debug(f"masked NMF rank={rank}: {len(history) - 1} iterations, objective {history[-1]:.6g}")
    return NMFResult(U=U, V=V, objective_history=history)
