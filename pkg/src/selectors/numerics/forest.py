"""
Random-forest regression backed by scikit-learn, exported to plain node arrays.

Fitted trees are flattened into depth-first node lists (children, split feature,
threshold, leaf value) so a model can be stored in an npz bundle and evaluated
without pickling estimator objects.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
from sklearn.ensemble import RandomForestRegressor

logger = logging.getLogger(__name__)

LEAF = -1
NODE_FIELDS = ("left", "right", "feature", "threshold", "value")


@dataclass(frozen=True)
class TreeArrays:
    left: np.ndarray
    right: np.ndarray
    feature: np.ndarray
    threshold: np.ndarray
    value: np.ndarray  # (nodes, n_outputs)

    def predict(self, X32: np.ndarray) -> np.ndarray:
        node = np.zeros(X32.shape[0], dtype=np.int64)
        active = self.left[node] != LEAF
        while active.any():
            rows = np.nonzero(active)[0]
            current = node[rows]
            go_left = X32[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])
            active = self.left[node] != LEAF
        return self.value[node]


@dataclass(frozen=True)
class ForestArrays:
    trees: List[TreeArrays]

    def predict(self, X: np.ndarray) -> np.ndarray:
        # split thresholds were learned on float32 inputs
        X32 = np.atleast_2d(np.asarray(X, dtype=np.float32))
        return np.mean([tree.predict(X32) for tree in self.trees], axis=0)

    def state(self, prefix: str) -> Dict[str, np.ndarray]:
        out = {}
        for t, tree in enumerate(self.trees):
            for name in NODE_FIELDS:
                out[f"{prefix}.{t}.{name}"] = getattr(tree, name)
        return out

    @classmethod
    def from_state(cls, state: Dict[str, np.ndarray], prefix: str) -> "ForestArrays":
        trees = []
        t = 0
        while f"{prefix}.{t}.left" in state:
            trees.append(TreeArrays(**{name: np.asarray(state[f"{prefix}.{t}.{name}"]) for name in NODE_FIELDS}))
            t += 1
        if not trees:
            raise ValueError(f"no forest stored under {prefix!r}")
        return cls(trees=trees)


def fit_forest(X: np.ndarray, Y: np.ndarray, n_estimators: int = 100, max_depth: int = 10,
               seed: int = 0, jobs: int = 1, max_features="sqrt", bootstrap: bool = True) -> ForestArrays:
    """Fit a multi-output regression forest and return its node arrays."""
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    model = RandomForestRegressor(n_estimators=n_estimators, max_depth=max_depth, max_features=max_features,
                                  bootstrap=bootstrap, random_state=seed, n_jobs=jobs)
    model.fit(np.asarray(X, dtype=np.float64), Y)
    trees = []
    for estimator in model.estimators_:
        tree = estimator.tree_
        trees.append(TreeArrays(
            left=tree.children_left.astype(np.int64),
            right=tree.children_right.astype(np.int64),
            feature=np.where(tree.feature >= 0, tree.feature, 0).astype(np.int64),
            threshold=tree.threshold.astype(np.float64),
            value=tree.value[:, :, 0].astype(np.float64),
        ))
    logger.debug(f"Fitted forest: {len(trees)} trees, {sum(t.left.size for t in trees)} nodes")
    return ForestArrays(trees=trees)
