import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from sklearn.cluster import kmeans_plusplus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KMeansResult:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia_history: List[float]

    @property
    def inertia(self) -> float:
        return self.inertia_history[-1]


def squared_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def nearest_centroid(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Index of the closest centroid per row; ties go to the lowest index."""
    return np.argmin(squared_distances(np.atleast_2d(X), C), axis=1)


def kmeans(X: np.ndarray, k: int, seed: int, max_iter: int = 100) -> KMeansResult:
    """
    Lloyd's algorithm from k-means++ seeds. A cluster left empty after an update
    is moved onto the point farthest from its current centroid.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k-means needs 1 <= k <= n, got k={k}, n={n}")
    centroids, _ = kmeans_plusplus(X, n_clusters=k, random_state=seed)
    centroids = centroids.astype(np.float64)

    assignments = nearest_centroid(X, centroids)
    dist = squared_distances(X, centroids)
    history = [float(dist[np.arange(n), assignments].sum())]

    for it in range(max_iter):
        for c in range(k):
            members = assignments == c
            if members.any():
                centroids[c] = X[members].mean(axis=0)
        point_dist = squared_distances(X, centroids)[np.arange(n), assignments]
        for c in range(k):
            if not np.any(assignments == c):
                far = int(np.argmax(point_dist))
                centroids[c] = X[far]
                point_dist[far] = 0.0
                logger.debug(f"k-means: reseeded empty cluster {c} at point {far}")

        new_assignments = nearest_centroid(X, centroids)
        dist = squared_distances(X, centroids)
        history.append(float(dist[np.arange(n), new_assignments].sum()))
        if np.array_equal(new_assignments, assignments):
            break
        assignments = new_assignments
    return KMeansResult(centroids=centroids, assignments=assignments, inertia_history=history)
