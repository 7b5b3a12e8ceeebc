import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.utils.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable simple graph.

    `edges` is an (m, 2) int64 array. Undirected graphs store each edge once
    as (u, v) with u < v; directed graphs store ordered pairs. Self-loops and
    duplicates are rejected, so build instances with `Graph.from_edges`.
    """

    id: str
    n: int
    edges: np.ndarray
    directed: bool = False
    node_labels: Optional[np.ndarray] = None
    domain: str = "unknown"
    name: str = ""

    def __post_init__(self):
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        edges.setflags(write=False)
        if self.n < 0:
            raise DataError(f"graph {self.id}: negative node count {self.n}")
        if len(edges):
            if edges.min() < 0 or edges.max() >= self.n:
                raise DataError(f"graph {self.id}: edge endpoint outside [0, {self.n})")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise DataError(f"graph {self.id}: self-loops are not allowed")
            if not self.directed and np.any(edges[:, 0] > edges[:, 1]):
                raise DataError(f"graph {self.id}: undirected edges must be stored as (u, v) with u < v")
            keys = edges[:, 0] * max(self.n, 1) + edges[:, 1]
            if len(np.unique(keys)) != len(keys):
                raise DataError(f"graph {self.id}: duplicate edges")
        if self.node_labels is not None:
            labels = np.array(self.node_labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise DataError(f"graph {self.id}: {labels.size} labels for {self.n} nodes")
            if labels.size and labels.min() < 0:
                raise DataError(f"graph {self.id}: node labels must be >= 0")
            labels.setflags(write=False)
            object.__setattr__(self, "node_labels", labels)

    @classmethod
    def from_edges(
        cls,
        graph_id: str,
        n: int,
        edges: Sequence[Tuple[int, int]],
        directed: bool = False,
        **kwargs,
    ) -> "Graph":
        """Canonicalize an edge list: drop self-loops, collapse duplicates, keep first-seen order."""
        seen = set()
        canonical: List[Tuple[int, int]] = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                continue
            if not directed and u > v:
                u, v = v, u
            if (u, v) in seen:
                continue
            seen.add((u, v))
            canonical.append((u, v))
        return cls(id=graph_id, n=n, edges=np.array(canonical, dtype=np.int64).reshape(-1, 2),
                   directed=directed, **kwargs)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        """Undirected neighbourhoods (directed edges are read both ways)."""
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges.tolist():
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degrees of the undirected (symmetrized) view."""
        deg = np.array([len(s) for s in self.neighbor_sets], dtype=np.int64)
        deg.setflags(write=False)
        return deg

    @property
    def density(self) -> float:
        if self.n < 2:
            return 0.0
        pairs = self.n * (self.n - 1)
        if not self.directed:
            pairs //= 2
        return self.m / pairs

    def to_networkx(self) -> nx.Graph:
        g = nx.DiGraph() if self.directed else nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges.tolist())
        return g

    def relabel(self, permutation: Sequence[int], graph_id: Optional[str] = None) -> "Graph":
        """Return the isomorphic graph where node i becomes permutation[i]."""
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise DataError(f"graph {self.id}: relabeling is not a permutation of {self.n} nodes")
        labels = None
        if self.node_labels is not None:
            labels = np.empty(self.n, dtype=np.int64)
            labels[perm] = self.node_labels
        return Graph.from_edges(
            graph_id or self.id, self.n, perm[self.edges].tolist(), directed=self.directed,
            node_labels=labels, domain=self.domain, name=self.name,
        )

    def summary(self) -> Dict[str, object]:
        return {"id": self.id, "n": self.n, "m": self.m, "directed": self.directed, "domain": self.domain}


def symmetrize(g: Graph) -> Graph:
    """Undirected graph whose edges are {(u, v) : (u, v) or (v, u) in g}. Identity on undirected input."""
    if not g.directed:
        return g
    return Graph.from_edges(g.id, g.n, g.edges.tolist(), directed=False, node_labels=g.node_labels,
                            domain=g.domain, name=g.name)
