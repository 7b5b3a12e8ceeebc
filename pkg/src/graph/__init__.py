"""Graph representation, ingestion and train/val/test split generation."""

from .graph import Graph, symmetrize
from .loaders import (
    CatalogEntry,
    load_catalog_graph,
    load_edge_list,
    load_graph_catalog,
    load_node_labels,
    write_graph_catalog,
)
from .splits import EdgeSplit, NodeSplit, generate_edge_split, generate_node_split

__all__ = [
    "Graph",
    "symmetrize",
    "CatalogEntry",
    "load_catalog_graph",
    "load_edge_list",
    "load_graph_catalog",
    "load_node_labels",
    "write_graph_catalog",
    "EdgeSplit",
    "NodeSplit",
    "generate_edge_split",
    "generate_node_split",
]
