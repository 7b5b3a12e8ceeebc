import json
import logging
import math
import os
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.utils.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PerformanceMatrix:
    """
    Graphs x models performance values with an observation mask.

    Entries where `mask` is False carry no information; their stored value is
    kept untouched (sparsification only flips mask bits).
    """

    values: np.ndarray
    mask: np.ndarray
    graph_ids: List[str]
    model_ids: List[str]
    metric: str = "unknown"
    task: str = "link_prediction"

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        mask = np.array(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape != mask.shape:
            raise DataError(f"values {values.shape} and mask {mask.shape} must be equal 2-d shapes")
        if values.shape != (len(self.graph_ids), len(self.model_ids)):
            raise DataError(f"matrix {values.shape} does not match {len(self.graph_ids)} graphs x "
                            f"{len(self.model_ids)} models")
        if len(set(self.graph_ids)) != len(self.graph_ids):
            raise DataError("duplicate graph ids in performance matrix")
        if len(set(self.model_ids)) != len(self.model_ids):
            raise DataError("duplicate model ids in performance matrix")
        if not np.all(np.isfinite(values[mask])):
            raise DataError("observed performance values must be finite")
        values.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "graph_ids", list(self.graph_ids))
        object.__setattr__(self, "model_ids", list(self.model_ids))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def observed(self) -> np.ndarray:
        """Values with NaN at unobserved entries."""
        return np.where(self.mask, self.values, np.nan)

    def with_mask(self, mask: np.ndarray) -> "PerformanceMatrix":
        return PerformanceMatrix(self.values, mask, self.graph_ids, self.model_ids, self.metric, self.task)

    def restrict_rows(self, graph_ids: Sequence[str]) -> "PerformanceMatrix":
        index = {g: i for i, g in enumerate(self.graph_ids)}
        missing = [g for g in graph_ids if g not in index]
        if missing:
            raise DataError(f"graphs {missing[:5]} not in performance matrix")
        rows = [index[g] for g in graph_ids]
        return PerformanceMatrix(self.values[rows], self.mask[rows], list(graph_ids), self.model_ids,
                                 self.metric, self.task)

    def restrict_columns(self, model_ids: Sequence[str]) -> "PerformanceMatrix":
        index = {mid: j for j, mid in enumerate(self.model_ids)}
        missing = [mid for mid in model_ids if mid not in index]
        if missing:
            raise DataError(f"models {missing[:5]} not in performance matrix")
        cols = [index[mid] for mid in model_ids]
        return PerformanceMatrix(self.values[:, cols], self.mask[:, cols], self.graph_ids, list(model_ids),
                                 self.metric, self.task)

    def row_index(self, graph_id: str) -> int:
        try:
            return self.graph_ids.index(graph_id)
        except ValueError:
            raise DataError(f"graph {graph_id} not in performance matrix") from None

    def best_index(self, row: int) -> int:
        """Index of the best observed model in `row`; ties go to the lowest index."""
        observed = np.where(self.mask[row], self.values[row], -np.inf)
        return int(np.argmax(observed))

    def column_means(self) -> np.ndarray:
        """Masked column means; never-observed columns are -inf."""
        return masked_column_means(self.values, self.mask)

    def row_means(self) -> np.ndarray:
        counts = self.mask.sum(axis=1)
        sums = np.where(self.mask, self.values, 0.0).sum(axis=1)
        return np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)

    def filled(self) -> np.ndarray:
        """Unobserved entries replaced by the row's observed mean."""
        return np.where(self.mask, self.values, self.row_means()[:, None])

    def fully_observed_rows(self) -> np.ndarray:
        return self.mask.all(axis=1)

    def shift_nonnegative(self) -> Tuple[np.ndarray, float]:
        """Observed values shifted so their minimum is >= 0 (unobserved set to 0), and the shift."""
        if not self.mask.any():
            return np.zeros_like(self.values), 0.0
        shift = max(0.0, -float(self.values[self.mask].min()))
        return np.where(self.mask, self.values + shift, 0.0), shift


def masked_column_means(values: np.ndarray, mask: np.ndarray, empty: float = -np.inf) -> np.ndarray:
    counts = mask.sum(axis=0)
    sums = np.where(mask, values, 0.0).sum(axis=0)
    return np.where(counts > 0, sums / np.maximum(counts, 1), empty)


def _format_value(value: float) -> str:
    return repr(float(value))


def metadata_path(path: str) -> str:
    return f"{path}.meta.json"


def save_performance_matrix(P: PerformanceMatrix, path: str) -> None:
    """CSV `graph_id,<model_id>...`; unobserved cells are empty strings."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    cells = [[_format_value(v) if o else "" for v, o in zip(P.values[i], P.mask[i])] for i in range(P.n)]
    df = pd.DataFrame(cells, columns=P.model_ids, dtype=object)
    df.insert(0, "graph_id", P.graph_ids)
    df.to_csv(path, index=False, lineterminator="\n")
    with open(metadata_path(path), "w", encoding="utf-8") as fw:
        json.dump({"metric": P.metric, "task": P.task}, fw, indent=2, sort_keys=True)


def load_performance_matrix(path: str, metric: Optional[str] = None, task: Optional[str] = None) -> PerformanceMatrix:
    if not os.path.exists(path):
        raise DataError("performance matrix not found", path=path)
    meta = {}
    if os.path.exists(metadata_path(path)):
        with open(metadata_path(path), "r", encoding="utf-8") as fr:
            meta = json.load(fr)

    # header=None keeps duplicate model ids visible (pandas would mangle them)
    try:
        raw = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"unreadable performance CSV: {e}", path=path) from None
    if raw.empty or raw.iat[0, 0] != "graph_id":
        raise DataError("header must start with graph_id", path=path, line=1)
    model_ids = raw.iloc[0, 1:].tolist()
    duplicated = pd.Series(model_ids).duplicated()
    if duplicated.any():
        raise DataError(f"duplicate model_id {model_ids[int(duplicated.idxmax())]!r}", path=path, line=1)

    body = raw.iloc[1:].reset_index(drop=True)
    graph_ids = body.iloc[:, 0].tolist()
    dup_rows = body.iloc[:, 0].duplicated()
    if dup_rows.any():
        row = int(dup_rows.idxmax())
        raise DataError(f"duplicate graph_id {graph_ids[row]!r}", path=path, line=row + 2)

    cells = body.iloc[:, 1:].apply(lambda col: col.str.strip()).to_numpy(dtype=object)
    mask = cells != ""
    values = np.zeros(mask.shape, dtype=np.float64)
    for row, col in np.argwhere(mask):
        try:
            value = float(cells[row, col])
        except ValueError:
            value = math.nan
        if not math.isfinite(value):
            raise DataError(f"non-numeric cell {cells[row, col]!r}", path=path, line=int(row) + 2,
                            column=model_ids[col])
        values[row, col] = value

    P = PerformanceMatrix(
        values=values.reshape(len(graph_ids), len(model_ids)),
        mask=mask.reshape(len(graph_ids), len(model_ids)),
        graph_ids=graph_ids,
        model_ids=model_ids,
        metric=metric or meta.get("metric", "unknown"),
        task=task or meta.get("task", "link_prediction"),
    )
    logger.info(f"Loaded performance matrix {path}: {P.n} graphs x {P.m} models, "
                f"{int(P.mask.sum())} observed ({P.metric}, {P.task})")
    return P


def observed_per_row(p: float, m: int) -> int:
    """Round-half-up of p*m, floored at 1."""
    return max(1, int(math.floor(p * m + 0.5)))


def sparsify_rows(P: PerformanceMatrix, p: float, seed: int,
                  rows: Optional[Sequence[int]] = None) -> PerformanceMatrix:
    """
    Keep exactly observed_per_row(p, m) = max(1, round-half-up(p*m)) entries, drawn uniformly without
    replacement, in each selected row (default: all rows). Other rows are untouched.
    """
    if not 0 < p <= 1:
        raise DataError(f"sparsity p must be in (0, 1], got {p}")
    rows = list(range(P.n)) if rows is None else list(rows)
    keep = observed_per_row(p, P.m)
    rng = np.random.default_rng(seed)
    mask = P.mask.copy()
    for i in rows:
        if not P.mask[i].all():
            raise DataError(f"row {P.graph_ids[i]} must be fully observed before sparsification")
        chosen = rng.choice(P.m, size=keep, replace=False)
        mask[i] = False
        mask[i, chosen] = True
    return P.with_mask(mask)
