import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Tuple

import networkx as nx
import numpy as np
import scipy.sparse as sp

from src.graph.graph import Graph, symmetrize
from src.metafeat.orbits import ORBIT_NAMES, graphlet_counts_from_orbits, orbit_count_matrix

logger = logging.getLogger(__name__)

PAGERANK_NONCONVERGED = "pagerank_not_converged"


@dataclass(frozen=True)
class Distribution:
    """Per-node or per-edge structural feature values of one graph."""

    values: np.ndarray
    level: str
    name: str
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.level not in ("node", "edge"):
            raise ValueError(f"unknown distribution level {self.level!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"distribution {self.name} contains non-finite values")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


def _adjacency(g: Graph) -> sp.csr_matrix:
    data = np.ones(g.m, dtype=np.float64)
    a = sp.csr_matrix((data, (g.edges[:, 0], g.edges[:, 1])), shape=(g.n, g.n))
    if not g.directed:
        a = a + a.T
    return a.tocsr()


def degree_distribution(g: Graph) -> Distribution:
    return Distribution(symmetrize(g).degrees.astype(np.float64), "node", "degree")


def kcore_numbers(g: Graph) -> Distribution:
    cores = nx.core_number(g.to_networkx())
    return Distribution(np.array([cores[v] for v in range(g.n)], dtype=np.float64), "node", "kcore")


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-8, max_iter: int = 200) -> Distribution:
    """
    Power iteration with uniform teleport; the mass of dangling nodes is spread
    uniformly. Directed graphs follow out-edges. On non-convergence the last
    iterate is returned with the `pagerank_not_converged` flag.
    """
    n = g.n
    if n < 1:
        raise ValueError("pagerank needs at least one node")
    a = _adjacency(g)
    out_deg = np.asarray(a.sum(axis=1)).ravel()
    dangling = out_deg == 0
    inv = np.divide(1.0, out_deg, out=np.zeros_like(out_deg), where=~dangling)
    transition_t = (sp.diags(inv) @ a).T.tocsr()

    x = np.full(n, 1.0 / n)
    flags: Tuple[str, ...] = ()
    for _ in range(max_iter):
        dangling_mass = x[dangling].sum()
        nxt = damping * (transition_t @ x + dangling_mass / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        err = np.abs(nxt - x).sum()
        x = nxt
        if err < n * tol:
            break
    else:
        logger.warning(f"{g.id}: pagerank did not converge in {max_iter} iterations")
        flags = (PAGERANK_NONCONVERGED,)
    return Distribution(x, "node", "pagerank", flags)


def wedge_triangle_counts(g: Graph) -> Tuple[Distribution, Distribution]:
    """Node-centred wedges C(deg, 2) and the number of triangles through each node."""
    sym = symmetrize(g)
    deg = sym.degrees.astype(np.float64)
    wedges = deg * (deg - 1) / 2
    a = _adjacency(sym)
    triangles = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2
    return Distribution(wedges, "node", "wedges"), Distribution(triangles, "node", "triangles")


def edge_orbit_counts(g: Graph, neighbor_cap: Optional[int] = None, seed: int = 0) -> Tuple[Distribution, ...]:
    counts = orbit_count_matrix(g, neighbor_cap=neighbor_cap, seed=seed).astype(np.float64)
    return tuple(Distribution(counts[:, j], "edge", f"orbit.{name}") for j, name in enumerate(ORBIT_NAMES))


def four_node_graphlet_frequencies(g: Graph) -> np.ndarray:
    """Frequencies of (p4, star, c4, tailed triangle, diamond, k4), summing to 1 (zeros if none occur)."""
    return _normalize(graphlet_counts_from_orbits(orbit_count_matrix(g)))


def _normalize(counts: np.ndarray) -> np.ndarray:
    counts = counts.astype(np.float64)
    total = counts.sum()
    return counts / total if total > 0 else np.zeros_like(counts)


def degree_assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over both edge directions; 0 when degrees do not vary."""
    sym = symmetrize(g)
    if sym.m == 0:
        return 0.0
    deg = sym.degrees.astype(np.float64)
    src = np.concatenate([sym.edges[:, 0], sym.edges[:, 1]])
    dst = np.concatenate([sym.edges[:, 1], sym.edges[:, 0]])
    x, y = deg[src], deg[dst]
    xc, yc = x - x.mean(), y - y.mean()
    den = np.sqrt(np.sum(xc * xc) * np.sum(yc * yc))
    if den <= 1e-12:
        return 0.0
    return float(np.sum(xc * yc) / den)


class StructuralProfile:
    """
    Lazily computed structural distributions of one graph, shared by the
    schema builders so each extractor runs at most once.
    """

    def __init__(self, g: Graph, neighbor_cap: Optional[int] = None, seed: int = 0,
                 damping: float = 0.85, tol: float = 1e-8, max_iter: int = 200):
        self.graph = g
        self.sym = symmetrize(g)
        self.neighbor_cap = neighbor_cap
        self.seed = seed
        self.pagerank_params = dict(damping=damping, tol=tol, max_iter=max_iter)

    @cached_property
    def degree(self) -> Distribution:
        return degree_distribution(self.sym)

    @cached_property
    def kcore(self) -> Distribution:
        return kcore_numbers(self.sym)

    @cached_property
    def pagerank(self) -> Distribution:
        return pagerank(self.sym, **self.pagerank_params)

    @cached_property
    def wedges_triangles(self) -> Tuple[Distribution, Distribution]:
        return wedge_triangle_counts(self.sym)

    @cached_property
    def orbit_counts(self) -> np.ndarray:
        return orbit_count_matrix(self.sym, neighbor_cap=self.neighbor_cap, seed=self.seed)

    @cached_property
    def orbits(self) -> Tuple[Distribution, ...]:
        counts = self.orbit_counts.astype(np.float64)
        return tuple(Distribution(counts[:, j], "edge", f"orbit.{name}") for j, name in enumerate(ORBIT_NAMES))

    def node_distributions(self) -> Tuple[Distribution, ...]:
        wedges, triangles = self.wedges_triangles
        return self.degree, self.kcore, self.pagerank, wedges, triangles

    def graphlet_frequencies(self) -> np.ndarray:
        return _normalize(graphlet_counts_from_orbits(self.orbit_counts))

    def global_stats(self) -> Dict[str, float]:
        g, sym = self.graph, self.sym
        deg = self.degree.values
        cores = self.kcore.values
        wedges, triangles = self.wedges_triangles
        tri_edge = self.orbit_counts[:, ORBIT_NAMES.index("triangle_edge")].astype(np.float64)
        k4_edge = self.orbit_counts[:, ORBIT_NAMES.index("k4_edge")].astype(np.float64)
        total_wedges = float(wedges.values.sum())
        total_triangles = float(triangles.values.sum()) / 3
        return {
            "n_nodes": float(g.n),
            "n_edges": float(g.m),
            "density": g.density,
            "density_symmetrized": sym.density,
            "max_degree": float(deg.max()) if deg.size else 0.0,
            "mean_degree": float(deg.mean()) if deg.size else 0.0,
            "assortativity": degree_assortativity(sym),
            "max_core": float(cores.max()) if cores.size else 0.0,
            "mean_core": float(cores.mean()) if cores.size else 0.0,
            "median_core": float(np.median(cores)) if cores.size else 0.0,
            "clustering_coefficient": 3 * total_triangles / total_wedges if total_wedges > 0 else 0.0,
            "triangles": total_triangles,
            "mean_triangles_per_edge": float(tri_edge.mean()) if tri_edge.size else 0.0,
            "median_triangles_per_edge": float(np.median(tri_edge)) if tri_edge.size else 0.0,
            "four_cliques": float(k4_edge.sum()) / 6,
            "mean_four_cliques_per_edge": float(k4_edge.mean()) if k4_edge.size else 0.0,
            "median_four_cliques_per_edge": float(np.median(k4_edge)) if k4_edge.size else 0.0,
        }


def global_stats(g: Graph) -> Dict[str, float]:
    """
    Whole-graph statistics: size, both densities, degree extremes, assortativity,
    core number summaries, clustering, and triangle / 4-clique totals and per-edge averages.
    """
    return StructuralProfile(g).global_stats()
