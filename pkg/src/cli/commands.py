import logging
import os
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.cli.run_config import RunConfig
from src.evalkit.report import markdown_table, render_report_csv, report_title, write_report, write_timings
from src.evalkit.report import evaluate as evaluate_testbed
from src.graph.loaders import CatalogEntry, load_catalog_graph, load_edge_list, load_graph_catalog
from src.graph.splits import generate_edge_split, generate_node_split, save_edge_split, save_node_split
from src.metafeat.features import MetaFeatureVector, meta_features
from src.metafeat.store import FeatureMatrix, load_feature_matrix, save_feature_matrix
from src.perfdata.catalog import load_model_catalog
from src.perfdata.matrix import PerformanceMatrix, load_performance_matrix
from src.selectors.base import SelectorModel, TrainCorpus
from src.selectors.bundle import load_bundle, save_bundle
from src.selectors.registry import get_selector, parse_algorithms
from src.testbeds.protocols import GraphRecord, TestbedSplit, build_testbed
from src.testbeds.store import load_testbed, save_testbed
from src.utils.errors import ConfigError, DataError
from src.utils.parallel import ordered_map

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DATA = 2


def features_path(out: str, schema: str) -> str:
    return os.path.join(out, f"features_{schema}.csv")


def _refuse_overwrite(path: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise ConfigError(f"{path} exists; pass --force to overwrite")


def _extract_graph(entry: CatalogEntry, schemas: List[str], neighbor_cap: Optional[int],
                   seed: int) -> Tuple[str, Optional[Dict[str, MetaFeatureVector]], Optional[str]]:
    try:
        g = load_catalog_graph(entry)
        return entry.graph_id, {s: meta_features(g, s, neighbor_cap=neighbor_cap, seed=seed) for s in schemas}, None
    except DataError as e:
        return entry.graph_id, None, str(e)


def cmd_features(cfg: RunConfig) -> int:
    """Extract meta-features for every catalog graph, one CSV per schema."""
    seed = cfg.require_seed()
    cfg.require("graphs")
    targets = {s: features_path(cfg.out, s) for s in cfg.schemas}
    for path in targets.values():
        _refuse_overwrite(path, cfg.force)
    entries = load_graph_catalog(cfg.graphs)

    outcomes = ordered_map(lambda e: _extract_graph(e, cfg.schemas, cfg.neighbor_cap, seed), entries, cfg.jobs)
    failed = [(graph_id, err) for graph_id, _, err in outcomes if err]
    for graph_id, err in failed:
        logger.error(f"features: skipped graph {graph_id}: {err}")
    for schema, path in targets.items():
        vectors = [vecs[schema] for _, vecs, err in outcomes if not err]
        save_feature_matrix(vectors, path, schema)
    if failed:
        logger.error(f"features: {len(failed)} of {len(entries)} graphs failed")
        return EXIT_DATA
    return EXIT_OK


def cmd_splits(cfg: RunConfig) -> int:
    """Seeded per-graph train/val/test splits for the configured task."""
    seed = cfg.require_seed()
    cfg.require("graphs")
    out_dir = os.path.join(cfg.out, "splits", cfg.task)
    os.makedirs(out_dir, exist_ok=True)
    failed = 0
    for entry in load_graph_catalog(cfg.graphs):
        kind = "edges" if cfg.task == "link_prediction" else "nodes"
        path = os.path.join(out_dir, f"{entry.graph_id}.{kind}.csv")
        _refuse_overwrite(path, cfg.force)
        try:
            g = load_catalog_graph(entry)
            if cfg.task == "link_prediction":
                save_edge_split(generate_edge_split(g, seed), path)
            else:
                save_node_split(generate_node_split(g, seed), path)
        except DataError as e:
            logger.error(f"splits: skipped graph {entry.graph_id}: {e}")
            failed += 1
    return EXIT_DATA if failed else EXIT_OK


def _load_testbed_inputs(cfg: RunConfig) -> Tuple[List[GraphRecord], PerformanceMatrix, dict]:
    cfg.require("graphs", "perf", "testbed")
    records = [GraphRecord.from_entry(e) for e in load_graph_catalog(cfg.graphs)]
    P = load_performance_matrix(cfg.perf)
    extra = {}
    if cfg.testbed == "sparse":
        cfg.require("sparsity")
    if cfg.testbed == "cross_task":
        cfg.require("target_perf", "models", "target_models")
        extra = {
            "target_P": load_performance_matrix(cfg.target_perf),
            "source_catalog": load_model_catalog(cfg.models),
            "target_catalog": load_model_catalog(cfg.target_models),
        }
    return records, P, extra


def _make_testbed(cfg: RunConfig, records, P, extra) -> TestbedSplit:
    return build_testbed(cfg.testbed, records, P, cfg.require_seed(), sparsity=cfg.sparsity,
                         epsilon=cfg.epsilon, **extra)


def cmd_testbed(cfg: RunConfig) -> int:
    cfg.require_seed()
    records, P, extra = _load_testbed_inputs(cfg)
    path = os.path.join(cfg.out, f"testbed_{cfg.testbed}.csv")
    _refuse_overwrite(path, cfg.force)
    save_testbed(_make_testbed(cfg, records, P, extra), path)
    return EXIT_OK


def _feature_matrix(cfg: RunConfig, schema: str) -> FeatureMatrix:
    path = cfg.features if cfg.features and len(cfg.schemas) == 1 else features_path(cfg.out, schema)
    if not os.path.exists(path):
        raise DataError(f"no {schema} meta-features; run `features --schema {schema}` first", path=path)
    return load_feature_matrix(path)


def cmd_run(cfg: RunConfig) -> int:
    """Fit and evaluate every algorithm on every fold, one report block per schema."""
    seed = cfg.require_seed()
    cfg.require("algorithms")
    algorithms = parse_algorithms(",".join(cfg.algorithms))
    records, P, extra = _load_testbed_inputs(cfg)
    if cfg.split:
        split = load_testbed(cfg.split)
        if split.testbed != cfg.testbed:
            raise ConfigError(f"--split holds a {split.testbed} testbed, not {cfg.testbed}")
    else:
        split = _make_testbed(cfg, records, P, extra)

    for schema in cfg.schemas:
        features = _feature_matrix(cfg, schema)
        reports, timings = evaluate_testbed(split, features, P, algorithms,
                                            configs={a: cfg.config_for(a) for a in algorithms}, seed=seed,
                                            jobs=cfg.jobs, target_P=extra.get("target_P"))
        out_dir = os.path.join(cfg.out, cfg.testbed, schema)
        report_path = os.path.join(out_dir, "report.csv")
        _refuse_overwrite(report_path, cfg.force)
        frame = write_report(reports, report_path, cfg.metrics)
        with open(os.path.join(out_dir, "report.md"), "w", encoding="utf-8") as fw:
            fw.write(markdown_table(frame, title=report_title(cfg.testbed, schema)))
        write_timings(timings, os.path.join(out_dir, "timings.csv"))
        logger.info(f"run: wrote {report_path}")
    return EXIT_OK


def _fit_model(cfg: RunConfig, algorithm: str) -> SelectorModel:
    cfg.require("perf")
    features = _feature_matrix(cfg, cfg.schema)
    P = load_performance_matrix(cfg.perf)
    catalog = load_model_catalog(cfg.models) if cfg.models else ()
    corpus = TrainCorpus.from_features(features, P, catalog)
    return get_selector(algorithm).fit(corpus, cfg.config_for(algorithm), cfg.require_seed())


def _single_algorithm(cfg: RunConfig) -> str:
    cfg.require("algorithms")
    algorithms = parse_algorithms(",".join(cfg.algorithms))
    if len(algorithms) != 1:
        raise ConfigError("exactly one algorithm is needed here")
    return algorithms[0]


def cmd_fit(cfg: RunConfig) -> int:
    """Fit one selector on the whole corpus and save its bundle."""
    algorithm = _single_algorithm(cfg)
    directory = cfg.bundle or os.path.join(cfg.out, "bundles", algorithm)
    _refuse_overwrite(os.path.join(directory, "manifest.json"), cfg.force)
    save_bundle(_fit_model(cfg, algorithm), directory)
    return EXIT_OK


def rank_models(model: SelectorModel, scores: np.ndarray) -> pd.DataFrame:
    order = np.argsort(-scores, kind="stable")
    return pd.DataFrame({
        "rank": np.arange(1, len(order) + 1),
        "model_id": [model.model_ids[j] for j in order],
        "score": scores[order],
        "top1": ["*"] + [""] * (len(order) - 1),
    })


def select_for_graph(model: SelectorModel, graph_path: str, directed: bool = False,
                     neighbor_cap: Optional[int] = None) -> pd.DataFrame:
    """Rank the candidate models for an unseen graph without training any of them."""
    g = load_edge_list(graph_path, directed=directed, graph_id=os.path.basename(graph_path))
    query = meta_features(g, model.schema, neighbor_cap=neighbor_cap, seed=model.seed)
    return rank_models(model, get_selector(model.algorithm).predict(model, query))


def cmd_select(cfg: RunConfig) -> int:
    cfg.require("query")
    if cfg.bundle:
        model = load_bundle(cfg.bundle)
    else:
        model = _fit_model(cfg, _single_algorithm(cfg))
    table = select_for_graph(model, cfg.query, cfg.directed, cfg.neighbor_cap)
    table.to_csv(sys.stdout, index=False, float_format="%.17g", lineterminator="\n")
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    """Re-render Markdown from a report CSV."""
    cfg.require("report")
    if not os.path.exists(cfg.report):
        raise DataError("report CSV not found", path=cfg.report)
    sys.stdout.write(render_report_csv(cfg.report))
    return EXIT_OK


COMMANDS = {
    "features": cmd_features,
    "splits": cmd_splits,
    "testbed": cmd_testbed,
    "run": cmd_run,
    "fit": cmd_fit,
    "select": cmd_select,
    "report": cmd_report,
}
