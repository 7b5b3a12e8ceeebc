import logging
from collections import Counter

import numpy as np
import pytest

from src.perfdata.catalog import ModelConfig
from src.perfdata.matrix import PerformanceMatrix
from src.testbeds import protocols
from src.testbeds.protocols import (Fold, GraphRecord, build_testbed, cross_task_split, fully_observed_splits,
                                    out_of_domain_splits, shared_models, small_to_large_split, sparse_testbed)
from src.testbeds.store import load_testbed, save_testbed
from src.utils.errors import ConfigError, DataError
from tests.synthetic import performance


def _records(n=100, domains=10, sizes=None):
    sizes = sizes if sizes is not None else [100] * n
    return [GraphRecord(f"g{i}", f"domain{i % domains}", sizes[i]) for i in range(n)]


def _assert_partition(split, graph_ids):
    tested = Counter(g for fold in split.folds for g in fold.test_ids)
    assert set(tested) == set(graph_ids)
    assert set(tested.values()) == {1}
    for fold in split.folds:
        assert set(fold.train_ids) | set(fold.test_ids) == set(graph_ids)


def test_fully_observed_folds_are_balanced_and_stratified():
    records = _records()
    split = fully_observed_splits(records, seed=0)
    assert len(split.folds) == 5
    _assert_partition(split, [r.graph_id for r in records])
    domain_of = {r.graph_id: r.domain for r in records}
    for fold in split.folds:
        assert len(fold.test_ids) == 20
        # ten graphs per domain spread over five folds
        assert set(Counter(domain_of[g] for g in fold.test_ids).values()) == {2}


def test_fully_observed_depends_only_on_seed():
    records = _records(30, 3)
    a, b = fully_observed_splits(records, 4), fully_observed_splits(records, 4)
    assert [f.test_ids for f in a.folds] == [f.test_ids for f in b.folds]
    c = fully_observed_splits(records, 5)
    assert [f.test_ids for f in a.folds] != [f.test_ids for f in c.folds]


def test_fully_observed_needs_a_graph_per_fold():
    with pytest.raises(DataError):
        fully_observed_splits(_records(4, 2), 0)


def test_duplicate_graph_ids_are_rejected():
    with pytest.raises(DataError, match="duplicate"):
        fully_observed_splits(_records(6, 2) + [GraphRecord("g0", "x", 5)], 0)


def test_sparse_masks_keep_a_fixed_count_per_row():
    records = _records(25, 5)
    P = performance(np.random.default_rng(0).uniform(size=(25, 20)))
    split = sparse_testbed(records, P, 0.3, seed=1)
    assert split.model_ids == tuple(P.model_ids)
    for fold in split.folds:
        assert fold.train_mask.shape == (len(fold.train_ids), 20)
        np.testing.assert_array_equal(fold.train_mask.sum(axis=1), 6)
        assert fold.params == {"p": 0.3}
    assert not np.array_equal(split.folds[0].train_mask[:5], split.folds[1].train_mask[:5])


def test_sparse_rejects_out_of_range_level():
    P = performance(np.ones((10, 4)))
    with pytest.raises(ConfigError):
        sparse_testbed(_records(10, 2), P, 0.0, seed=0)


def test_sparse_warns_off_grid(caplog):
    P = performance(np.ones((10, 4)))
    with caplog.at_level(logging.WARNING):
        sparse_testbed(_records(10, 2), P, 0.4, seed=0)
    assert "outside the benchmark grid" in caplog.text


def test_out_of_domain_never_trains_on_a_test_domain():
    records = _records()
    domain_of = {r.graph_id: r.domain for r in records}
    split = out_of_domain_splits(records, seed=2)
    assert len(split.folds) == 5
    _assert_partition(split, [r.graph_id for r in records])
    for fold in split.folds:
        test_domains = {domain_of[g] for g in fold.test_ids}
        assert len(test_domains) == 2
        assert test_domains.isdisjoint(domain_of[g] for g in fold.train_ids)
        assert fold.params["test_domains"] == sorted(test_domains)


def test_out_of_domain_with_few_domains(caplog):
    with caplog.at_level(logging.WARNING):
        split = out_of_domain_splits(_records(12, 3), seed=0)
    assert len(split.folds) == 3
    assert "3 folds" in caplog.text
    with pytest.raises(DataError, match="at least 2 domains"):
        out_of_domain_splits(_records(12, 1), seed=0)


def test_small_to_large_threshold():
    sizes = [50, 20000, 9999, 10000, 3]
    split = small_to_large_split(_records(5, 1, sizes))
    (fold,) = split.folds
    assert fold.train_ids == ("g0", "g2", "g4")
    assert fold.test_ids == ("g1", "g3")
    with pytest.raises(DataError):
        small_to_large_split(_records(5, 1, [10] * 5))


def _catalogs():
    source = [ModelConfig(f"s{j}", "gcn", {"h": j}) for j in range(350)]
    target = [ModelConfig(f"t{j}", "gcn", {"h": j}) for j in range(310)]
    target += [ModelConfig(f"t{j}", "gat", {"h": j}) for j in range(310, 327)]
    return source, target


def _task_matrix(graph_ids, catalog, task, seed):
    values = np.random.default_rng(seed).uniform(size=(len(graph_ids), len(catalog)))
    return PerformanceMatrix(values, np.ones_like(values, dtype=bool), graph_ids,
                             [m.model_id for m in catalog], metric="auc", task=task)


def test_cross_task_uses_shared_models_and_new_graphs():
    source, target = _catalogs()
    assert len(shared_models(source, target)) == 310
    source_P = _task_matrix([f"g{i}" for i in range(20)], source, "link_prediction", 0)
    target_P = _task_matrix([f"g{i}" for i in range(15, 30)], target, "node_classification", 1)
    split = cross_task_split(source_P, source, target_P, target)
    (fold,) = split.folds
    assert fold.train_ids == tuple(source_P.graph_ids)
    assert fold.test_ids == tuple(f"g{i}" for i in range(20, 30))
    assert split.model_ids == tuple(f"s{j}" for j in range(310))
    assert split.evaluation_model_ids == tuple(f"t{j}" for j in range(310))
    assert split.params["shared_models"] == 310


def test_cross_task_without_shared_models():
    source = [ModelConfig("s0", "gcn", {"h": 1})]
    target = [ModelConfig("t0", "gcn", {"h": 2})]
    with pytest.raises(DataError, match="no shared models"):
        cross_task_split(_task_matrix(["a"], source, "link_prediction", 0), source,
                         _task_matrix(["b"], target, "node_classification", 0), target)


def test_train_test_overlap_is_rejected():
    fold = Fold(index=0, train_ids=("a", "b"), test_ids=("b",))
    with pytest.raises(DataError, match="both train and test"):
        protocols.TestbedSplit("fully_observed", [fold], seed=0)


def test_build_testbed_dispatch_and_errors():
    records = _records(12, 3)
    P = performance(np.ones((10, 4)))
    split = build_testbed("fully_observed", records, P, seed=0)
    # g10 and g11 have no performance row
    assert {g for f in split.folds for g in f.test_ids} == set(P.graph_ids)
    with pytest.raises(ConfigError, match="unknown testbed"):
        build_testbed("leave_one_out", records, P, seed=0)
    with pytest.raises(ConfigError, match="sparsity"):
        build_testbed("sparse", records, P, seed=0)
    with pytest.raises(ConfigError, match="target-task"):
        build_testbed("cross_task", records, P, seed=0)


def test_sparse_split_file_restores_masks(tmp_path):
    P = performance(np.random.default_rng(0).uniform(size=(15, 6)))
    split = sparse_testbed(_records(15, 3), P, 0.5, seed=3)
    path = str(tmp_path / "sparse.csv")
    save_testbed(split, path)
    loaded = load_testbed(path)
    assert (loaded.testbed, loaded.seed, loaded.model_ids) == ("sparse", 3, split.model_ids)
    for a, b in zip(split.folds, loaded.folds):
        assert a.train_ids == b.train_ids and a.test_ids == b.test_ids
        np.testing.assert_array_equal(a.train_mask, b.train_mask)


def test_split_file_keeps_fold_params(tmp_path):
    split = out_of_domain_splits(_records(20, 4), seed=1)
    path = str(tmp_path / "ood.csv")
    save_testbed(split, path)
    loaded = load_testbed(path)
    assert [f.params for f in loaded.folds] == [f.params for f in split.folds]
    assert all(f.train_mask is None for f in loaded.folds)


def test_split_file_errors(tmp_path):
    with pytest.raises(DataError, match="not found"):
        load_testbed(str(tmp_path / "absent.csv"))
    split = small_to_large_split(_records(3, 1, [5, 5, 20000]))
    path = str(tmp_path / "s2l.csv")
    save_testbed(split, path)
    with open(path, "a", encoding="utf-8") as fw:
        fw.write("0,validate,g9\n")
    with pytest.raises(DataError, match="unknown role") as exc:
        load_testbed(path)
    assert exc.value.line == 5
