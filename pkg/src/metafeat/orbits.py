"""
Exact per-edge counting of the 12 edge orbits of connected 3- and 4-node graphlets.

For an edge (u, v) the neighbourhoods are split into
    T  = N(u) & N(v)          nodes closing a triangle on (u, v)
    Su = N(u) - N(v) - {v}    nodes attached to u only
    Sv = N(v) - N(u) - {u}    nodes attached to v only
and every induced 4-node graphlet through (u, v) is classified by where its
two other nodes fall. Counts are of induced occurrences.

Orbit order (column index of the count matrix):
    0  p3_edge             edge of an open wedge
    1  triangle_edge       edge of a triangle
    2  p4_end_edge         end edge of a 4-path
    3  p4_mid_edge         middle edge of a 4-path
    4  star_edge           edge of a 3-star
    5  c4_edge             edge of a 4-cycle
    6  tailed_tail_edge    pendant edge of a tailed triangle
    7  tailed_base_edge    triangle edge opposite the tail's attachment node
    8  tailed_apex_edge    triangle edge touching the attachment node
    9  diamond_chord_edge  chord between the two degree-3 nodes of a diamond
    10 diamond_cycle_edge  outer 4-cycle edge of a diamond
    11 k4_edge             edge of a 4-clique
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.graph.graph import Graph, symmetrize

logger = logging.getLogger(__name__)

ORBIT_NAMES: Tuple[str, ...] = (
    "p3_edge",
    "triangle_edge",
    "p4_end_edge",
    "p4_mid_edge",
    "star_edge",
    "c4_edge",
    "tailed_tail_edge",
    "tailed_base_edge",
    "tailed_apex_edge",
    "diamond_chord_edge",
    "diamond_cycle_edge",
    "k4_edge",
)

GRAPHLET_NAMES: Tuple[str, ...] = ("p4", "star", "c4", "tailed_triangle", "diamond", "k4")

# (orbit column, edges of the graphlet lying in that orbit) used to turn edge orbit
# totals into graphlet counts
_GRAPHLET_FROM_ORBIT = (
    (ORBIT_NAMES.index("p4_end_edge"), 2),
    (ORBIT_NAMES.index("star_edge"), 3),
    (ORBIT_NAMES.index("c4_edge"), 4),
    (ORBIT_NAMES.index("tailed_tail_edge"), 1),
    (ORBIT_NAMES.index("diamond_chord_edge"), 1),
    (ORBIT_NAMES.index("k4_edge"), 6),
)


def _capped_neighbors(
    neighbors: Sequence[frozenset], cap: Optional[int], seed: int
) -> Sequence[frozenset]:
    if cap is None:
        return neighbors
    rng = np.random.default_rng(seed)
    capped = []
    for s in neighbors:
        if len(s) > cap:
            picked = rng.choice(np.array(sorted(s)), size=cap, replace=False)
            capped.append(frozenset(int(x) for x in picked))
        else:
            capped.append(s)
    return capped


def orbit_count_matrix(g: Graph, neighbor_cap: Optional[int] = None, seed: int = 0) -> np.ndarray:
    """
    (m, 12) int64 matrix of edge orbit counts, rows in `symmetrize(g).edges` order.

    With `neighbor_cap` set, neighbourhoods larger than the cap are uniformly
    subsampled first, which bounds the per-edge cost but makes counts approximate.
    """
    g = symmetrize(g)
    adj = _capped_neighbors(g.neighbor_sets, neighbor_cap, seed)
    counts = np.zeros((g.m, len(ORBIT_NAMES)), dtype=np.int64)

    for i, (u, v) in enumerate(g.edges.tolist()):
        nu, nv = adj[u], adj[v]
        tri = nu & nv
        su = nu - nv - {v}
        sv = nv - nu - {u}
        reach = nu | nv | {u, v}
        t, a, b = len(tri), len(su), len(sv)

        k4 = sum(len(adj[w] & tri) for w in tri) // 2
        su_links = sum(len(adj[w] & su) for w in su) // 2
        sv_links = sum(len(adj[w] & sv) for w in sv) // 2
        c4 = sum(len(adj[w] & sv) for w in su)

        cycle = 0
        apex = 0
        base = 0
        for w in tri:
            to_su = len(adj[w] & su)
            to_sv = len(adj[w] & sv)
            cycle += to_su + to_sv
            apex += (a - to_su) + (b - to_sv)
            base += len(adj[w] - reach)

        end = sum(len(adj[w] - reach) for w in su) + sum(len(adj[w] - reach) for w in sv)

        counts[i] = (
            a + b,
            t,
            end,
            a * b - c4,
            a * (a - 1) // 2 - su_links + b * (b - 1) // 2 - sv_links,
            c4,
            su_links + sv_links,
            base,
            apex,
            t * (t - 1) // 2 - k4,
            cycle,
            k4,
        )
    return counts


def graphlet_counts_from_orbits(counts: np.ndarray) -> np.ndarray:
    """Induced 4-node graphlet counts (GRAPHLET_NAMES order) from an orbit count matrix."""
    totals = counts.sum(axis=0)
    return np.array([totals[col] // per for col, per in _GRAPHLET_FROM_ORBIT], dtype=np.int64)
