import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.graph.graph import Graph
from src.graph.loaders import CatalogEntry
from src.perfdata.catalog import ModelConfig
from src.perfdata.matrix import PerformanceMatrix, sparsify_rows
from src.utils.config import N_FOLDS, SMALL_TO_LARGE_EPSILON, SPARSITY_GRID, TESTBEDS
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphRecord:
    """The per-graph facts a protocol needs: identity, domain and size."""

    graph_id: str
    domain: str
    n_nodes: int

    @classmethod
    def from_entry(cls, entry: CatalogEntry) -> "GraphRecord":
        return cls(entry.graph_id, entry.domain, entry.n_nodes)

    @classmethod
    def from_graph(cls, g: Graph) -> "GraphRecord":
        return cls(g.id, g.domain, g.n)


@dataclass(frozen=True, eq=False)
class Fold:
    index: int
    train_ids: Tuple[str, ...]
    test_ids: Tuple[str, ...]
    # rows follow train_ids, columns follow TestbedSplit.model_ids; None = use P's own mask
    train_mask: Optional[np.ndarray] = None
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class TestbedSplit:
    testbed: str
    folds: List[Fold]
    seed: int
    model_ids: Tuple[str, ...] = ()
    # cross-task only: target-side column ids aligned with model_ids
    test_model_ids: Tuple[str, ...] = ()
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for fold in self.folds:
            overlap = set(fold.train_ids) & set(fold.test_ids)
            if overlap:
                raise DataError(f"{self.testbed} fold {fold.index}: {sorted(overlap)[:5]} in both train and test")

    @property
    def evaluation_model_ids(self) -> Tuple[str, ...]:
        return self.test_model_ids or self.model_ids


def _records(graphs: Sequence[Any]) -> List[GraphRecord]:
    out = []
    for g in graphs:
        if isinstance(g, GraphRecord):
            out.append(g)
        elif isinstance(g, Graph):
            out.append(GraphRecord.from_graph(g))
        else:
            out.append(GraphRecord.from_entry(g))
    ids = [r.graph_id for r in out]
    if len(set(ids)) != len(ids):
        raise DataError("duplicate graph ids given to a testbed")
    return out


def _folds_from_assignment(records: List[GraphRecord], assignment: Dict[str, int], n_folds: int) -> List[Fold]:
    folds = []
    for k in range(n_folds):
        test = tuple(r.graph_id for r in records if assignment[r.graph_id] == k)
        train = tuple(r.graph_id for r in records if assignment[r.graph_id] != k)
        folds.append(Fold(index=k, train_ids=train, test_ids=test))
    return folds


def fully_observed_splits(graphs: Sequence[Any], seed: int, n_folds: int = N_FOLDS) -> TestbedSplit:
    """
    Domain-stratified k-fold: within each domain (in sorted order) the graphs are
    shuffled and dealt round-robin, continuing the deal across domains so the
    folds also stay balanced overall.
    """
    records = _records(graphs)
    if len(records) < n_folds:
        raise DataError(f"stratified {n_folds}-fold split needs at least {n_folds} graphs, got {len(records)}")
    by_domain: Dict[str, List[GraphRecord]] = OrderedDict()
    for r in sorted(records, key=lambda r: r.domain):
        by_domain.setdefault(r.domain, []).append(r)
    rng = np.random.default_rng(seed)
    assignment, dealt = {}, 0
    for domain, members in by_domain.items():
        for pos in rng.permutation(len(members)):
            assignment[members[pos].graph_id] = dealt % n_folds
            dealt += 1
    return TestbedSplit("fully_observed", _folds_from_assignment(records, assignment, n_folds), seed)


def _fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([seed, fold]).generate_state(1)[0])


def sparse_testbed(graphs: Sequence[Any], P: PerformanceMatrix, p: float, seed: int,
                   n_folds: int = N_FOLDS) -> TestbedSplit:
    """Stratified folds whose training rows keep max(1, round(p*m)) observed entries each."""
    if not 0 < p <= 1:
        raise ConfigError(f"sparsity must be in (0, 1], got {p}")
    if p not in SPARSITY_GRID:
        logger.warning(f"sparsity {p} is outside the benchmark grid {SPARSITY_GRID}")
    base = fully_observed_splits(graphs, seed, n_folds)
    folds = []
    for fold in base.folds:
        train = P.restrict_rows(fold.train_ids)
        sparse = sparsify_rows(train, p, seed=_fold_seed(seed, fold.index))
        folds.append(Fold(index=fold.index, train_ids=fold.train_ids, test_ids=fold.test_ids,
                          train_mask=sparse.mask.copy(), params={"p": p}))
    return TestbedSplit("sparse", folds, seed, model_ids=tuple(P.model_ids), params={"p": p})


def out_of_domain_splits(graphs: Sequence[Any], seed: int, n_folds: int = N_FOLDS) -> TestbedSplit:
    """Domains shuffled then cut into contiguous groups; each fold tests one group of domains."""
    records = _records(graphs)
    domains = sorted({r.domain for r in records})
    if len(domains) < 2:
        raise DataError(f"out-of-domain testbed needs at least 2 domains, got {domains}")
    n_groups = min(n_folds, len(domains))
    if n_groups < n_folds:
        logger.warning(f"only {len(domains)} domains: out-of-domain testbed uses {n_groups} folds")
    shuffled = [domains[i] for i in np.random.default_rng(seed).permutation(len(domains))]
    group_of = {}
    for k, group in enumerate(np.array_split(np.arange(len(shuffled)), n_groups)):
        for i in group:
            group_of[shuffled[i]] = k
    assignment = {r.graph_id: group_of[r.domain] for r in records}
    folds = _folds_from_assignment(records, assignment, n_groups)
    for fold in folds:
        fold.params["test_domains"] = sorted(d for d, k in group_of.items() if k == fold.index)
    return TestbedSplit("out_of_domain", folds, seed)


def small_to_large_split(graphs: Sequence[Any], epsilon: int = SMALL_TO_LARGE_EPSILON, seed: int = 0) -> TestbedSplit:
    """Train on graphs with fewer than epsilon nodes, test on the rest."""
    records = _records(graphs)
    train = tuple(r.graph_id for r in records if r.n_nodes < epsilon)
    test = tuple(r.graph_id for r in records if r.n_nodes >= epsilon)
    if not train or not test:
        raise DataError(f"small-to-large split at epsilon={epsilon} leaves {len(train)} train and "
                        f"{len(test)} test graphs")
    fold = Fold(index=0, train_ids=train, test_ids=test, params={"epsilon": epsilon})
    return TestbedSplit("small_to_large", [fold], seed, params={"epsilon": epsilon})


def shared_models(source_catalog: Sequence[ModelConfig], target_catalog: Sequence[ModelConfig]) -> List[Tuple[str, str]]:
    """(source_id, target_id) pairs of identical (method, hyperparameters), in source catalog order."""
    target_by_key = {m.key(): m.model_id for m in target_catalog}
    return [(m.model_id, target_by_key[m.key()]) for m in source_catalog if m.key() in target_by_key]


def cross_task_split(source_P: PerformanceMatrix, source_catalog: Sequence[ModelConfig],
                     target_P: PerformanceMatrix, target_catalog: Sequence[ModelConfig],
                     seed: int = 0) -> TestbedSplit:
    """
    Train on every source-task graph, test on target-task graphs absent from the
    source task, scoring only the models both catalogs share.
    """
    pairs = [(s, t) for s, t in shared_models(source_catalog, target_catalog)
             if s in source_P.model_ids and t in target_P.model_ids]
    if not pairs:
        raise DataError(f"no shared models between {source_P.task} and {target_P.task} catalogs")
    source_graphs = set(source_P.graph_ids)
    test = tuple(g for g in target_P.graph_ids if g not in source_graphs)
    excluded = len(target_P.graph_ids) - len(test)
    if excluded:
        logger.info(f"cross-task: excluded {excluded} target graphs also present in the source task")
    if not test:
        raise DataError("every target graph also appears in the source task")
    params = {"source_task": source_P.task, "target_task": target_P.task, "shared_models": len(pairs)}
    fold = Fold(index=0, train_ids=tuple(source_P.graph_ids), test_ids=test, params=dict(params))
    return TestbedSplit("cross_task", [fold], seed, model_ids=tuple(s for s, _ in pairs),
                        test_model_ids=tuple(t for _, t in pairs), params=params)


def build_testbed(name: str, graphs: Sequence[Any], P: PerformanceMatrix, seed: int,
                  sparsity: Optional[float] = None, epsilon: int = SMALL_TO_LARGE_EPSILON,
                  target_P: Optional[PerformanceMatrix] = None,
                  source_catalog: Sequence[ModelConfig] = (),
                  target_catalog: Sequence[ModelConfig] = ()) -> TestbedSplit:
    """Dispatch on the testbed name; graphs outside P are ignored."""
    if name not in TESTBEDS:
        raise ConfigError(f"unknown testbed {name!r}; choose from {', '.join(TESTBEDS)}")
    in_matrix = set(P.graph_ids)
    records = [r for r in _records(graphs) if r.graph_id in in_matrix]
    if name == "fully_observed":
        return fully_observed_splits(records, seed)
    if name == "sparse":
        if sparsity is None:
            raise ConfigError("the sparse testbed needs a sparsity level")
        return sparse_testbed(records, P, sparsity, seed)
    if name == "out_of_domain":
        return out_of_domain_splits(records, seed)
    if name == "small_to_large":
        return small_to_large_split(records, epsilon, seed)
    if target_P is None:
        raise ConfigError("the cross-task testbed needs a target-task performance matrix")
    return cross_task_split(P, source_catalog, target_P, target_catalog, seed)
