"""Structural meta-graph features: extractors, statistical summarization and schema builders."""

from .extractors import (
    Distribution,
    StructuralProfile,
    edge_orbit_counts,
    four_node_graphlet_frequencies,
    global_stats,
    kcore_numbers,
    pagerank,
    wedge_triangle_counts,
)
from .features import MetaFeatureVector, extract_many, feature_names, meta_features
from .orbits import GRAPHLET_NAMES, ORBIT_NAMES
from .store import FeatureMatrix, load_feature_matrix, save_feature_matrix
from .summary import SIGMA, SummaryFunctionSet, summarize

__all__ = [
    "Distribution",
    "StructuralProfile",
    "edge_orbit_counts",
    "four_node_graphlet_frequencies",
    "global_stats",
    "kcore_numbers",
    "pagerank",
    "wedge_triangle_counts",
    "MetaFeatureVector",
    "extract_many",
    "feature_names",
    "meta_features",
    "GRAPHLET_NAMES",
    "ORBIT_NAMES",
    "FeatureMatrix",
    "load_feature_matrix",
    "save_feature_matrix",
    "SIGMA",
    "SummaryFunctionSet",
    "summarize",
]
