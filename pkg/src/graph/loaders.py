import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.graph.graph import Graph
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

CATALOG_COLUMNS = ["graph_id", "name", "domain", "n_nodes", "n_edges", "has_labels"]


@dataclass(frozen=True)
class CatalogEntry:
    graph_id: str
    name: str
    domain: str
    n_nodes: int
    n_edges: int
    has_labels: bool
    path: Optional[str] = None
    labels_path: Optional[str] = None
    directed: bool = False


def load_edge_list(
    path: str,
    directed: bool = False,
    comment_prefix: str = "#",
    graph_id: Optional[str] = None,
    domain: str = "unknown",
    name: Optional[str] = None,
) -> Graph:
    """
    Read a whitespace-separated edge list.

    Node ids are re-indexed densely in first-appearance order; tokens past the
    second are treated as weights and ignored. Self-loops and duplicate edges
    are dropped.
    """
    if not os.path.exists(path):
        raise DataError("edge list not found", path=path)

    index: Dict[str, int] = {}
    raw_edges: List[Tuple[int, int]] = []
    line_no = 0
    try:
        with open(path, "rb") as f:
            for line_no, raw in enumerate(f, start=1):
                line = raw.decode("utf-8").strip()
                if not line or (comment_prefix and line.startswith(comment_prefix)):
                    continue
                tokens = line.split()
                if len(tokens) < 2:
                    raise DataError("expected at least two node ids", path=path, line=line_no)
                ids = []
                for token in tokens[:2]:
                    try:
                        key = str(int(token))
                    except ValueError:
                        raise DataError(f"non-integer node id {token!r}", path=path, line=line_no) from None
                    if key not in index:
                        index[key] = len(index)
                    ids.append(index[key])
                raw_edges.append((ids[0], ids[1]))
    except UnicodeDecodeError as e:
        raise DataError(f"not valid UTF-8 text ({e.reason})", path=path, line=line_no) from None
    except OSError as e:
        raise DataError(f"cannot read edge list: {e.strerror or e}", path=path) from None

    graph_id = graph_id or Path(path).stem
    g = Graph.from_edges(graph_id, len(index), raw_edges, directed=directed, domain=domain,
                         name=name or graph_id)
    if g.m == 0:
        raise DataError("graph has no edges after removing self-loops", path=path)
    dropped = len(raw_edges) - g.m
    logger.info(f"Loaded {graph_id}: n={g.n} m={g.m} ({dropped} duplicate/self-loop lines dropped)")
    return g


def load_node_labels(path: str, n: int, comment_prefix: str = "#") -> np.ndarray:
    """Read `node_index label` lines into a length-n label array; unlisted nodes are an error."""
    labels = np.full(n, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line or (comment_prefix and line.startswith(comment_prefix)):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise DataError("expected `node_index label`", path=path, line=line_no)
            try:
                node, label = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise DataError("non-integer node index or label", path=path, line=line_no) from None
            if not 0 <= node < n:
                raise DataError(f"node index {node} outside [0, {n})", path=path, line=line_no)
            if label < 0:
                raise DataError(f"negative label {label}", path=path, line=line_no)
            labels[node] = label
    missing = int(np.sum(labels < 0))
    if missing:
        raise DataError(f"{missing} nodes have no label", path=path)
    return labels


def load_graph_catalog(path: str) -> List[CatalogEntry]:
    """
    Read the graph catalog CSV. Optional `path`, `labels_path` and `directed`
    columns locate the edge list files relative to the catalog.
    """
    if not os.path.exists(path):
        raise DataError("graph catalog not found", path=path)
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [c for c in CATALOG_COLUMNS if c not in df.columns]
    if missing:
        raise DataError(f"catalog is missing columns {missing}", path=path)
    if df["graph_id"].duplicated().any():
        dup = df.loc[df["graph_id"].duplicated(), "graph_id"].iloc[0]
        raise DataError(f"duplicate graph_id {dup!r}", path=path)

    base = Path(path).parent
    entries = []
    for row_no, row in enumerate(df.itertuples(index=False), start=2):
        record = row._asdict()
        try:
            n_nodes = int(record["n_nodes"])
            n_edges = int(record["n_edges"])
        except ValueError:
            raise DataError("n_nodes/n_edges must be integers", path=path, line=row_no) from None
        graph_path = record.get("path") or None
        labels_path = record.get("labels_path") or None
        entries.append(CatalogEntry(
            graph_id=record["graph_id"],
            name=record["name"],
            domain=record["domain"],
            n_nodes=n_nodes,
            n_edges=n_edges,
            has_labels=_parse_bool(record["has_labels"]),
            path=str(base / graph_path) if graph_path else None,
            labels_path=str(base / labels_path) if labels_path else None,
            directed=_parse_bool(record.get("directed", "false")),
        ))
    logger.info(f"Catalog {path}: {len(entries)} graphs")
    return entries


def load_catalog_graph(entry: CatalogEntry) -> Graph:
    """Load the edge list (and labels) of one catalog entry, checking the declared counts."""
    if not entry.path:
        raise DataError(f"catalog entry {entry.graph_id} has no edge list path")
    g = load_edge_list(entry.path, directed=entry.directed, graph_id=entry.graph_id,
                       domain=entry.domain, name=entry.name)
    if entry.labels_path:
        g = Graph(id=g.id, n=g.n, edges=g.edges, directed=g.directed,
                  node_labels=load_node_labels(entry.labels_path, g.n), domain=g.domain, name=g.name)
    if (g.n, g.m) != (entry.n_nodes, entry.n_edges):
        logger.warning(f"{entry.graph_id}: catalog declares n={entry.n_nodes} m={entry.n_edges}, "
                       f"file has n={g.n} m={g.m}")
    return g


def write_graph_catalog(entries: List[CatalogEntry], path: str) -> None:
    rows = [{
        "graph_id": e.graph_id, "name": e.name, "domain": e.domain, "n_nodes": e.n_nodes,
        "n_edges": e.n_edges, "has_labels": str(e.has_labels).lower(),
        "path": os.path.relpath(e.path, Path(path).parent) if e.path else "",
        "directed": str(e.directed).lower(),
    } for e in entries]
    pd.DataFrame(rows).to_csv(path, index=False)


def _parse_bool(value: str) -> bool:
    return str(value).strip().lower() in {"1", "true", "yes", "y", "t"}
