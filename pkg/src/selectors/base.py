import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.metafeat.features import MetaFeatureVector
from src.metafeat.store import FeatureMatrix
from src.perfdata.catalog import ModelConfig
from src.perfdata.matrix import PerformanceMatrix
from src.utils.config import hyperparams_for
from src.utils.errors import DataError, TrainingError

logger = logging.getLogger(__name__)

Query = Union[MetaFeatureVector, np.ndarray, Sequence[float]]


@dataclass(frozen=True, eq=False)
class TrainCorpus:
    """Meta-features M (n x d) aligned row-for-row with a performance matrix P."""

    M: np.ndarray
    P: PerformanceMatrix
    catalog: Tuple[ModelConfig, ...] = ()
    schema: str = "regular"

    def __post_init__(self):
        M = np.array(self.M, dtype=np.float64)
        if M.ndim != 2 or M.shape[1] == 0:
            raise DataError(f"meta-feature matrix must be n x d with d > 0, got shape {M.shape}")
        if M.shape[0] != self.P.n:
            raise DataError(f"{M.shape[0]} meta-feature rows but {self.P.n} performance rows")
        if not np.all(np.isfinite(M)):
            raise DataError("meta-feature matrix contains non-finite values")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "catalog", tuple(self.catalog))

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def m(self) -> int:
        return self.P.m

    @property
    def d(self) -> int:
        return self.M.shape[1]

    @classmethod
    def from_features(cls, features: FeatureMatrix, P: PerformanceMatrix,
                      catalog: Sequence[ModelConfig] = ()) -> "TrainCorpus":
        return cls(M=features.subset(P.graph_ids), P=P, catalog=tuple(catalog), schema=features.schema)

    def subset(self, graph_ids: Sequence[str], mask: Optional[np.ndarray] = None) -> "TrainCorpus":
        """Rows for `graph_ids`, optionally with a replacement observation mask."""
        rows = [self.P.row_index(g) for g in graph_ids]
        P = self.P.restrict_rows(graph_ids)
        if mask is not None:
            P = P.with_mask(mask)
        return TrainCorpus(M=self.M[rows], P=P, catalog=self.catalog, schema=self.schema)


@dataclass(frozen=True, eq=False)
class SelectorModel:
    algorithm: str
    state: Dict[str, np.ndarray]
    config: Dict[str, Any]
    seed: int
    model_ids: List[str]
    schema: str = "regular"
    feature_dim: int = 0
    info: Dict[str, Any] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.model_ids)


def zscore_stats(M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean and standard deviation; constant dimensions get a scale of 1."""
    mean = M.mean(axis=0)
    std = M.std(axis=0)
    return mean, np.where(std > 0, std, 1.0)


def zscore(X: np.ndarray, mean: np.ndarray, scale: np.ndarray) -> np.ndarray:
    return (X - mean) / scale


def query_values(query: Query) -> np.ndarray:
    if isinstance(query, MetaFeatureVector):
        return query.values
    return np.asarray(query, dtype=np.float64).reshape(-1)


def cosine_similarity_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarity; a pair involving a zero vector has similarity 0."""
    na = np.linalg.norm(A, axis=1)
    nb = np.linalg.norm(B, axis=1)
    dots = A @ B.T
    denom = np.outer(na, nb)
    return np.divide(dots, denom, out=np.zeros_like(dots), where=denom > 0)


class Selector:
    """
    An instantaneous model-selection algorithm.

    `fit` learns everything from the training corpus once; `predict` scores the
    m candidate models for a query meta-feature vector (higher is better) and
    never trains a candidate model.
    """

    algorithm: str = ""

    def fit(self, corpus: TrainCorpus, config: Optional[Dict[str, Any]] = None, seed: int = 0) -> SelectorModel:
        config = hyperparams_for(self.algorithm, config)
        logger.debug(f"Fitting {self.algorithm} on {corpus.n} graphs x {corpus.m} models (seed={seed})")
        state, info = self._fit(corpus, config, seed)
        state["observed_columns"] = corpus.P.mask.any(axis=0)
        return SelectorModel(algorithm=self.algorithm, state=state, config=config, seed=seed,
                             model_ids=list(corpus.P.model_ids), schema=corpus.schema,
                             feature_dim=corpus.d, info=info)

    def predict(self, model: SelectorModel, query: Query) -> np.ndarray:
        q = query_values(query)
        if q.shape != (model.feature_dim,):
            raise DataError(f"query has {q.size} meta-features, {model.algorithm} model expects {model.feature_dim}")
        scores = np.asarray(self._predict(model, q), dtype=np.float64).reshape(-1)
        observed = np.asarray(model.state["observed_columns"], dtype=bool)
        if scores.shape != (model.m,):
            raise TrainingError(f"{model.algorithm} produced {scores.size} scores for {model.m} models")
        if not np.all(np.isfinite(scores[observed])):
            raise TrainingError(f"{model.algorithm} produced non-finite scores")
        return np.where(observed, scores, -np.inf)

    def select(self, corpus: TrainCorpus, query: Query, config: Optional[Dict[str, Any]] = None,
               seed: int = 0) -> np.ndarray:
        return self.predict(self.fit(corpus, config, seed), query)

    def _fit(self, corpus: TrainCorpus, config: Dict[str, Any], seed: int) -> Tuple[Dict[str, np.ndarray], dict]:
        raise NotImplementedError

    def _predict(self, model: SelectorModel, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError
