import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from src.metafeat.features import MetaFeatureVector, feature_names, schema_dimension
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureMatrix:
    """Meta-feature matrix of a corpus: one row per graph."""

    schema: str
    graph_ids: List[str]
    values: np.ndarray

    def row(self, graph_id: str) -> np.ndarray:
        return self.values[self.graph_ids.index(graph_id)]

    def subset(self, graph_ids: Sequence[str]) -> np.ndarray:
        index = {g: i for i, g in enumerate(self.graph_ids)}
        missing = [g for g in graph_ids if g not in index]
        if missing:
            raise DataError(f"no meta-features for graphs {missing[:5]}")
        return self.values[[index[g] for g in graph_ids]]


def sidecar_path(path: str) -> str:
    return f"{path}.meta.json"


def save_feature_matrix(vectors: Sequence[MetaFeatureVector], path: str, schema: str) -> None:
    """CSV `graph_id,f0,...,f{d-1}` plus a JSON sidecar naming the schema and columns."""
    dim = schema_dimension(schema)
    for v in vectors:
        if v.schema != schema:
            raise DataError(f"vector for {v.graph_id} uses schema {v.schema}, expected {schema}")
    columns = [f"f{i}" for i in range(dim)]
    df = pd.DataFrame(np.vstack([v.values for v in vectors]) if vectors else np.zeros((0, dim)), columns=columns)
    df.insert(0, "graph_id", [v.graph_id for v in vectors])
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")

    extraction_log: Dict[str, List[str]] = {v.graph_id: list(v.log) for v in vectors if v.log}
    meta = {"schema": schema, "dimension": dim, "feature_names": feature_names(schema),
            "extraction_log": extraction_log}
    with open(sidecar_path(path), "w", encoding="utf-8") as fw:
        json.dump(meta, fw, indent=2, sort_keys=True)
    logger.info(f"Wrote {len(vectors)} x {dim} {schema} features to {path}")


def load_feature_matrix(path: str) -> FeatureMatrix:
    if not os.path.exists(path):
        raise DataError("meta-feature file not found", path=path)
    schema = None
    if os.path.exists(sidecar_path(path)):
        with open(sidecar_path(path), "r", encoding="utf-8") as fr:
            schema = json.load(fr).get("schema")
    df = pd.read_csv(path, dtype={"graph_id": str})
    if df.columns[0] != "graph_id":
        raise DataError("first column must be graph_id", path=path)
    if df["graph_id"].duplicated().any():
        raise DataError("duplicate graph_id in meta-feature file", path=path)
    values = df.drop(columns=["graph_id"]).to_numpy(dtype=np.float64)
    if schema is not None and values.shape[1] != schema_dimension(schema):
        raise DataError(f"{values.shape[1]} feature columns, schema {schema} needs {schema_dimension(schema)}",
                        path=path)
    if not np.all(np.isfinite(values)):
        raise DataError("meta-features must be finite", path=path)
    return FeatureMatrix(schema=schema or "unknown", graph_ids=df["graph_id"].tolist(), values=values)
