import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.graph.graph import Graph
from src.metafeat.extractors import StructuralProfile
from src.metafeat.orbits import GRAPHLET_NAMES, ORBIT_NAMES
from src.metafeat.summary import SIGMA, summarize
from src.utils.config import SCHEMA_DIMENSIONS
from src.utils.errors import ConfigError, DataError
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

NODE_DISTRIBUTIONS = ("degree", "kcore", "pagerank", "wedges", "triangles")
REGULAR_GLOBALS = ("density", "density_symmetrized", "assortativity")
COMPACT_GLOBALS = (
    "n_nodes", "n_edges", "density", "max_degree", "mean_degree", "assortativity",
    "max_core", "mean_core", "median_core", "clustering_coefficient", "triangles",
    "mean_triangles_per_edge", "median_triangles_per_edge", "four_cliques",
    "mean_four_cliques_per_edge", "median_four_cliques_per_edge",
)
COMPACT_ORBIT_STATS = ("mean", "median", "max")


@dataclass(frozen=True)
class MetaFeatureVector:
    schema: str
    values: np.ndarray
    graph_id: str
    log: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        expected = SCHEMA_DIMENSIONS.get(self.schema)
        if expected is None:
            raise ConfigError(f"unknown meta-feature schema {self.schema!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (expected,):
            raise DataError(f"{self.schema} vector for {self.graph_id} has {values.size} values, expected {expected}")
        if not np.all(np.isfinite(values)):
            raise DataError(f"{self.schema} vector for {self.graph_id} has non-finite values")
        object.__setattr__(self, "values", values)


def feature_names(schema: str) -> List[str]:
    """Self-documenting column names, in vector order."""
    if schema == "regular":
        names = [f"{d}.{s}" for d in NODE_DISTRIBUTIONS for s in SIGMA.names]
        return names + [f"global.{g}" for g in REGULAR_GLOBALS]
    if schema == "graphlets":
        return [f"orbit.{o}.{s}" for o in ORBIT_NAMES for s in SIGMA.names]
    if schema == "compact":
        names = [f"global.{g}" for g in COMPACT_GLOBALS]
        names += [f"orbit.{o}.{s}" for o in ORBIT_NAMES for s in COMPACT_ORBIT_STATS]
        return names + [f"graphlet.{g}" for g in GRAPHLET_NAMES]
    if schema == "reg_plus_graphlets":
        return feature_names("regular") + feature_names("graphlets")
    raise ConfigError(f"unknown meta-feature schema {schema!r}")


def _regular(profile: StructuralProfile, log: List[str]) -> np.ndarray:
    parts = [summarize(d.values, SIGMA, log=log, label=d.name) for d in profile.node_distributions()]
    stats = profile.global_stats()
    parts.append(np.array([stats[k] for k in REGULAR_GLOBALS]))
    return np.concatenate(parts)


def _graphlets(profile: StructuralProfile, log: List[str]) -> np.ndarray:
    return np.concatenate([summarize(d.values, SIGMA, log=log, label=d.name) for d in profile.orbits])


def _compact(profile: StructuralProfile, log: List[str]) -> np.ndarray:
    stats = profile.global_stats()
    counts = profile.orbit_counts.astype(np.float64)
    orbit_part = []
    for j in range(len(ORBIT_NAMES)):
        col = counts[:, j]
        orbit_part += [col.mean(), np.median(col), col.max()]
    return np.concatenate([
        np.array([stats[k] for k in COMPACT_GLOBALS]),
        np.array(orbit_part),
        profile.graphlet_frequencies(),
    ])


_BUILDERS = {
    "regular": (_regular,),
    "graphlets": (_graphlets,),
    "compact": (_compact,),
    "reg_plus_graphlets": (_regular, _graphlets),
}


def meta_features(g: Graph, schema: str = "regular", neighbor_cap: Optional[int] = None,
                  seed: int = 0) -> MetaFeatureVector:
    """Extract the meta-feature vector of `g` under `schema`."""
    if schema not in _BUILDERS:
        raise ConfigError(f"unknown meta-feature schema {schema!r}")
    if g.n == 0 or g.m == 0:
        raise DataError(f"graph {g.id} is empty")
    profile = StructuralProfile(g, neighbor_cap=neighbor_cap, seed=seed)
    log: List[str] = []
    values = np.concatenate([build(profile, log) for build in _BUILDERS[schema]])
    if profile.pagerank.flags and schema in ("regular", "reg_plus_graphlets"):
        log.extend(profile.pagerank.flags)
    bad = ~np.isfinite(values)
    if bad.any():
        log.append(f"non_finite_globals:{int(bad.sum())}")
        values[bad] = 0.0
    return MetaFeatureVector(schema=schema, values=values, graph_id=g.id, log=tuple(log))


def extract_many(graphs: Sequence[Graph], schema: str, jobs: int = 1,
                 neighbor_cap: Optional[int] = None) -> List[MetaFeatureVector]:
    """Extract features for many graphs; output order follows input order for any `jobs`."""
    return ordered_map(lambda g: meta_features(g, schema, neighbor_cap=neighbor_cap), graphs, jobs=jobs)


def stack(vectors: Sequence[MetaFeatureVector]) -> Tuple[List[str], np.ndarray]:
    ids = [v.graph_id for v in vectors]
    return ids, np.vstack([v.values for v in vectors]) if vectors else np.zeros((0, 0))


def schema_dimension(schema: str) -> int:
    try:
        return SCHEMA_DIMENSIONS[schema]
    except KeyError:
        raise ConfigError(f"unknown meta-feature schema {schema!r}") from None


def describe(schema: str) -> Dict[str, object]:
    return {"schema": schema, "dimension": schema_dimension(schema), "feature_names": feature_names(schema)}
