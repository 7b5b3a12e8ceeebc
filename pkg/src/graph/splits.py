import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from src.graph.graph import Graph
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

# train / val percentages; test takes the remainder
TRAIN_PCT = 64
VAL_PCT = 16

# above this density negatives are drawn from an explicit non-edge list (at 0.5 and
# beyond there are fewer non-edges than edges, so the split is infeasible anyway)
ENUMERATE_DENSITY = 0.25


@dataclass(frozen=True)
class NodeSplit:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    seed: int


@dataclass(frozen=True)
class EdgeSplit:
    pos_train: np.ndarray
    pos_val: np.ndarray
    pos_test: np.ndarray
    neg_train: np.ndarray
    neg_val: np.ndarray
    neg_test: np.ndarray
    seed: int

    def roles(self):
        return {
            "pos_train": self.pos_train, "pos_val": self.pos_val, "pos_test": self.pos_test,
            "neg_train": self.neg_train, "neg_val": self.neg_val, "neg_test": self.neg_test,
        }


def split_sizes(total: int) -> Tuple[int, int, int]:
    """64/16/20 with floor for train and val, remainder to test."""
    train = total * TRAIN_PCT // 100
    val = total * VAL_PCT // 100
    return train, val, total - train - val


def generate_node_split(g: Graph, seed: int) -> NodeSplit:
    if g.n < 5:
        raise DataError(f"graph {g.id}: node split needs at least 5 nodes, got {g.n}")
    perm = np.random.default_rng(seed).permutation(g.n)
    n_train, n_val, _ = split_sizes(g.n)
    return NodeSplit(
        train=perm[:n_train], val=perm[n_train:n_train + n_val], test=perm[n_train + n_val:], seed=seed,
    )


def generate_edge_split(g: Graph, seed: int) -> EdgeSplit:
    """
    Split positive edges 64/16/20 and pair every split with the same number
    of sampled non-edges. Negatives are disjoint across the three splits.
    """
    if g.m < 5:
        raise DataError(f"graph {g.id}: edge split needs at least 5 edges, got {g.m}")
    pairs = g.n * (g.n - 1) if g.directed else g.n * (g.n - 1) // 2
    available = pairs - g.m
    if available < g.m:
        raise DataError(f"graph {g.id}: {available} non-edges cannot match {g.m} positive edges")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.m)
    n_train, n_val, _ = split_sizes(g.m)
    positives = g.edges[perm]

    if g.density > ENUMERATE_DENSITY:
        negatives = _enumerate_negatives(g, g.m, rng)
    else:
        negatives = _rejection_negatives(g, g.m, rng)

    cut1, cut2 = n_train, n_train + n_val
    return EdgeSplit(
        pos_train=positives[:cut1], pos_val=positives[cut1:cut2], pos_test=positives[cut2:],
        neg_train=negatives[:cut1], neg_val=negatives[cut1:cut2], neg_test=negatives[cut2:],
        seed=seed,
    )


def _canonical(g: Graph, u: int, v: int) -> Tuple[int, int]:
    if not g.directed and u > v:
        return v, u
    return u, v


def _rejection_negatives(g: Graph, count: int, rng: np.random.Generator) -> np.ndarray:
    existing = set(map(tuple, g.edges.tolist()))
    chosen = []
    seen = set()
    while len(chosen) < count:
        draws = rng.integers(0, g.n, size=(2 * (count - len(chosen)) + 16, 2))
        for u, v in draws.tolist():
            if u == v:
                continue
            key = _canonical(g, u, v)
            if key in existing or key in seen:
                continue
            seen.add(key)
            chosen.append(key)
            if len(chosen) == count:
                break
    return np.array(chosen, dtype=np.int64).reshape(-1, 2)


def _enumerate_negatives(g: Graph, count: int, rng: np.random.Generator) -> np.ndarray:
    existing = set(map(tuple, g.edges.tolist()))
    candidates = []
    for u in range(g.n):
        for v in range(g.n):
            if u == v or (not g.directed and u > v):
                continue
            if (u, v) not in existing:
                candidates.append((u, v))
    idx = rng.choice(len(candidates), size=count, replace=False)
    return np.array(candidates, dtype=np.int64)[idx].reshape(-1, 2)


def save_node_split(split: NodeSplit, path: str) -> None:
    rows = [(role, int(i)) for role, arr in (("train", split.train), ("val", split.val), ("test", split.test))
            for i in arr]
    pd.DataFrame(rows, columns=["role", "index"]).to_csv(path, index=False)


def load_node_split(path: str, seed: int) -> NodeSplit:
    df = pd.read_csv(path)
    parts = {role: df.loc[df["role"] == role, "index"].to_numpy(dtype=np.int64) for role in ("train", "val", "test")}
    return NodeSplit(seed=seed, **parts)


def save_edge_split(split: EdgeSplit, path: str) -> None:
    rows = [(role, int(u), int(v)) for role, arr in split.roles().items() for u, v in arr.tolist()]
    pd.DataFrame(rows, columns=["role", "u", "v"]).to_csv(path, index=False)


def load_edge_split(path: str, seed: int) -> EdgeSplit:
    df = pd.read_csv(path)
    parts = {}
    for role in ("pos_train", "pos_val", "pos_test", "neg_train", "neg_val", "neg_test"):
        parts[role] = df.loc[df["role"] == role, ["u", "v"]].to_numpy(dtype=np.int64).reshape(-1, 2)
    return EdgeSplit(seed=seed, **parts)
