import logging
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.evalkit.metrics import score_metrics
from src.metafeat.store import FeatureMatrix
from src.perfdata.matrix import PerformanceMatrix
from src.selectors.base import TrainCorpus
from src.selectors.registry import display_name, get_selector
from src.testbeds.protocols import Fold, TestbedSplit
from src.utils.config import REPORT_METRICS, SCHEMA_DISPLAY_NAMES
from src.utils.errors import ProtocolError
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["testbed", "algorithm", "metric", "fold", "value"]


@dataclass(frozen=True)
class GraphResult:
    fold: int
    graph_id: str
    metrics: Dict[str, float]


@dataclass
class EvaluationReport:
    """Per-test-graph metric values of one algorithm on one testbed, with fold and overall aggregates."""

    testbed: str
    algorithm: str
    results: List[GraphResult] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.results)

    def folds(self) -> List[int]:
        return sorted({r.fold for r in self.results})

    def values(self, metric: str, fold: Optional[int] = None) -> np.ndarray:
        return np.array([r.metrics[metric] for r in self.results if fold is None or r.fold == fold])

    def fold_mean(self, metric: str, fold: int) -> float:
        return float(self.values(metric, fold).mean())

    def mean(self, metric: str) -> float:
        return float(self.values(metric).mean())

    def stderr(self, metric: str) -> float:
        """Sample standard deviation over test graphs divided by sqrt(#test graphs)."""
        values = self.values(metric)
        if values.size < 2:
            return 0.0
        return float(values.std(ddof=1) / np.sqrt(values.size))


@dataclass(frozen=True)
class Timing:
    algorithm: str
    fold: int
    fit_seconds: float
    median_predict_seconds: float


def check_test_rows(split: TestbedSplit, fold: Fold, P: PerformanceMatrix) -> None:
    for graph_id in fold.test_ids:
        if not P.mask[P.row_index(graph_id)].all():
            raise ProtocolError("test graph has unobserved performances", testbed=split.testbed,
                                fold=fold.index, graph_id=graph_id)


def fold_corpus(split: TestbedSplit, fold: Fold, features: FeatureMatrix, P: PerformanceMatrix) -> TrainCorpus:
    train_P = P.restrict_rows(fold.train_ids)
    if split.model_ids:
        train_P = train_P.restrict_columns(split.model_ids)
    if fold.train_mask is not None:
        train_P = train_P.with_mask(fold.train_mask)
    return TrainCorpus(M=features.subset(fold.train_ids), P=train_P, schema=features.schema)


def evaluate_predictions(split: TestbedSplit, algorithm: str, predictions: Sequence[Tuple[int, str, np.ndarray]],
                         test_P: PerformanceMatrix) -> EvaluationReport:
    """Score (fold, graph_id, scores) triples against the fully observed test rows of `test_P`."""
    report = EvaluationReport(testbed=split.testbed, algorithm=algorithm)
    for fold_index, graph_id, scores in predictions:
        row = test_P.row_index(graph_id)
        if not test_P.mask[row].all():
            raise ProtocolError("test graph has unobserved performances", testbed=split.testbed,
                                fold=fold_index, graph_id=graph_id)
        report.results.append(GraphResult(fold_index, graph_id, score_metrics(scores, test_P.values[row])))
    return report


def run_fold(split: TestbedSplit, fold: Fold, algorithm: str, features: FeatureMatrix, P: PerformanceMatrix,
             config: Optional[dict], seed: int, test_P: PerformanceMatrix):
    """Fit `algorithm` on the fold's training side and score every test graph."""
    selector = get_selector(algorithm)
    corpus = fold_corpus(split, fold, features, P)
    started = time.perf_counter()
    model = selector.fit(corpus, config, seed)
    fit_seconds = time.perf_counter() - started

    predictions, predict_seconds = [], []
    for graph_id in fold.test_ids:
        started = time.perf_counter()
        scores = selector.predict(model, features.row(graph_id))
        predict_seconds.append(time.perf_counter() - started)
        predictions.append((fold.index, graph_id, scores))
    timing = Timing(algorithm, fold.index, fit_seconds, float(np.median(predict_seconds)) if predict_seconds else 0.0)
    logger.info(f"{split.testbed} fold {fold.index} {algorithm}: fit {fit_seconds:.3f}s, "
                f"{len(predictions)} test graphs")
    return predictions, timing


def evaluate(split: TestbedSplit, features: FeatureMatrix, P: PerformanceMatrix, algorithms: Sequence[str],
             configs: Optional[Dict[str, dict]] = None, seed: int = 0, jobs: int = 1,
             target_P: Optional[PerformanceMatrix] = None) -> Tuple[List[EvaluationReport], List[Timing]]:
    """
    Run every algorithm on every fold of `split`. (algorithm, fold) pairs fan out
    over `jobs` workers; results are merged in algorithm-then-fold order.
    """
    configs = configs or {}
    test_P = target_P if target_P is not None else P
    if split.test_model_ids:
        test_P = test_P.restrict_columns(split.test_model_ids)
    elif split.model_ids:
        test_P = test_P.restrict_columns(split.model_ids)
    for fold in split.folds:
        check_test_rows(split, fold, test_P)

    tasks = [(algorithm, fold) for algorithm in algorithms for fold in split.folds]
    outcomes = ordered_map(
        lambda task: run_fold(split, task[1], task[0], features, P, configs.get(task[0]), seed, test_P),
        tasks, jobs)

    reports, timings = [], []
    for algorithm in algorithms:
        predictions = []
        for (task_algorithm, _), (fold_predictions, timing) in zip(tasks, outcomes):
            if task_algorithm == algorithm:
                predictions += fold_predictions
                timings.append(timing)
        reports.append(evaluate_predictions(split, algorithm, predictions, test_P))
    return reports, timings


def report_frame(reports: Sequence[EvaluationReport], metrics: Sequence[str] = REPORT_METRICS) -> pd.DataFrame:
    """Long-format rows: one per (algorithm, metric, fold), then `mean` and `stderr` aggregate rows."""
    rows = []
    for report in reports:
        for metric in metrics:
            for fold in report.folds():
                rows.append((report.testbed, report.algorithm, metric, str(fold), report.fold_mean(metric, fold)))
            rows.append((report.testbed, report.algorithm, metric, "mean", report.mean(metric)))
            rows.append((report.testbed, report.algorithm, metric, "stderr", report.stderr(metric)))
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_report(reports: Sequence[EvaluationReport], path: str,
                 metrics: Sequence[str] = REPORT_METRICS) -> pd.DataFrame:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame = report_frame(reports, metrics)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return frame


def write_timings(timings: Sequence[Timing], path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    pd.DataFrame([t.__dict__ for t in timings],
                 columns=["algorithm", "fold", "fit_seconds", "median_predict_seconds"]).to_csv(
        path, index=False, lineterminator="\n")


def markdown_table(frame: pd.DataFrame, title: Optional[str] = None, digits: int = 4) -> str:
    """Metrics as rows, algorithms as columns, `mean (stderr)` cells with the best mean per row in bold."""
    aggregates = frame[frame["fold"].isin(["mean", "stderr"])]
    algorithms = list(dict.fromkeys(aggregates["algorithm"]))
    metrics = list(dict.fromkeys(aggregates["metric"]))
    lookup = {(r.algorithm, r.metric, r.fold): float(r.value) for r in aggregates.itertuples(index=False)}

    lines = []
    if title:
        lines += [f"### {title}", ""]
    lines.append("| metric | " + " | ".join(display_name(a) for a in algorithms) + " |")
    lines.append("|---|" + "---|" * len(algorithms))
    for metric in metrics:
        means = [lookup[(a, metric, "mean")] for a in algorithms]
        best = max(round(v, digits) for v in means)
        cells = []
        for a, mean in zip(algorithms, means):
            cell = f"{mean:.{digits}f} ({lookup[(a, metric, 'stderr')]:.{digits}f})"
            cells.append(f"**{cell}**" if round(mean, digits) == best else cell)
        lines.append(f"| {metric.upper()} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def report_title(testbed: str, schema: Optional[str] = None) -> str:
    if schema:
        return f"{testbed} ({SCHEMA_DISPLAY_NAMES.get(schema, schema)})"
    return testbed


def render_report_csv(path: str, schema: Optional[str] = None) -> str:
    """Markdown for an existing report CSV, one table per testbed."""
    frame = pd.read_csv(path, dtype={"fold": str})
    blocks = []
    for testbed, part in frame.groupby("testbed", sort=False):
        blocks.append(markdown_table(part, title=report_title(testbed, schema)))
    return "\n".join(blocks)
