import numpy as np
import pytest

from src.perfdata.catalog import (ModelConfig, canonical_hyperparams, load_model_catalog, save_model_catalog,
                                  validate_catalog)
from src.perfdata.matrix import (PerformanceMatrix, load_performance_matrix, observed_per_row,
                                 save_performance_matrix, sparsify_rows)
from src.utils.errors import DataError
from tests.synthetic import performance


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_load_fully_observed(tmp_path):
    P = load_performance_matrix(_write(tmp_path / "p.csv", "graph_id,gcn,sage\ng1,0.9,0.8\ng2,0.7,0.75\n"))
    assert P.graph_ids == ["g1", "g2"] and P.model_ids == ["gcn", "sage"]
    assert P.mask.all()
    assert P.values[1, 1] == 0.75
    assert P.best_index(1) == 1


def test_empty_cell_is_unobserved(tmp_path):
    P = load_performance_matrix(_write(tmp_path / "p.csv", "graph_id,a,b,c\ng1,0.9,,0.1\n"))
    assert P.mask.tolist() == [[True, False, True]]
    assert np.isnan(P.observed[0, 1])


def test_duplicate_model_id(tmp_path):
    with pytest.raises(DataError, match="duplicate model_id 'a'"):
        load_performance_matrix(_write(tmp_path / "p.csv", "graph_id,a,a\ng1,1,2\n"))


def test_duplicate_graph_id_reports_line(tmp_path):
    with pytest.raises(DataError, match="line 3"):
        load_performance_matrix(_write(tmp_path / "p.csv", "graph_id,a\ng1,1\ng1,2\n"))


def test_non_numeric_cell_reports_line_and_column(tmp_path):
    with pytest.raises(DataError) as exc:
        load_performance_matrix(_write(tmp_path / "p.csv", "graph_id,a,b\ng1,0.5,oops\n"))
    assert exc.value.line == 2
    assert exc.value.column == "b"


def test_header_must_start_with_graph_id(tmp_path):
    with pytest.raises(DataError, match="graph_id"):
        load_performance_matrix(_write(tmp_path / "p.csv", "name,a\ng1,1\n"))


def test_file_keeps_values_and_metadata(tmp_path):
    values = np.random.default_rng(0).uniform(size=(4, 3))
    mask = np.array([[1, 1, 1], [1, 0, 1], [0, 0, 1], [1, 1, 1]], dtype=bool)
    P = PerformanceMatrix(values, mask, ["a", "b", "c", "d"], ["x", "y", "z"], metric="auc",
                          task="node_classification")
    path = str(tmp_path / "perf.csv")
    save_performance_matrix(P, path)
    loaded = load_performance_matrix(path)
    np.testing.assert_array_equal(loaded.mask, mask)
    np.testing.assert_array_equal(loaded.values[mask], values[mask])
    assert (loaded.metric, loaded.task) == ("auc", "node_classification")


def test_non_finite_observed_values_are_rejected():
    with pytest.raises(DataError):
        performance(np.array([[np.nan, 1.0]]))


def test_column_means_and_fill():
    P = performance(np.array([[0.9, 0.1, 0.0], [0.7, 0.3, 0.0]]),
                    np.array([[True, True, False], [True, False, False]]))
    np.testing.assert_allclose(P.column_means()[:2], [0.8, 0.1])
    assert P.column_means()[2] == -np.inf
    np.testing.assert_allclose(P.filled(), [[0.9, 0.1, 0.5], [0.7, 0.7, 0.7]])


def test_best_index_tie_goes_to_lowest():
    assert performance(np.array([[0.5, 0.9, 0.9]])).best_index(0) == 1


def test_shift_nonnegative():
    P = performance(np.array([[-0.5, 1.0], [0.25, 9.0]]), np.array([[True, True], [True, False]]))
    shifted, shift = P.shift_nonnegative()
    assert shift == 0.5
    np.testing.assert_allclose(shifted, [[0.0, 1.5], [0.75, 0.0]])


@pytest.mark.parametrize("p,m,expected", [(0.3, 10, 3), (0.1, 350, 35), (0.25, 10, 3), (0.01, 10, 1), (1.0, 7, 7)])
def test_observed_per_row(p, m, expected):
    assert observed_per_row(p, m) == expected


def test_sparsify_keeps_exact_counts():
    P = performance(np.random.default_rng(1).uniform(size=(20, 10)))
    sparse = sparsify_rows(P, 0.3, seed=4)
    np.testing.assert_array_equal(sparse.mask.sum(axis=1), 3)
    np.testing.assert_array_equal(sparse.values, P.values)


def test_sparsify_full_fraction_is_identity():
    P = performance(np.random.default_rng(1).uniform(size=(5, 6)))
    np.testing.assert_array_equal(sparsify_rows(P, 1.0, seed=0).mask, P.mask)


def test_sparsify_selected_rows_only():
    P = performance(np.random.default_rng(1).uniform(size=(6, 8)))
    sparse = sparsify_rows(P, 0.5, seed=0, rows=[0, 2])
    assert sparse.mask.sum(axis=1).tolist() == [4, 8, 4, 8, 8, 8]


def test_sparsify_is_deterministic():
    P = performance(np.random.default_rng(1).uniform(size=(10, 20)))
    np.testing.assert_array_equal(sparsify_rows(P, 0.5, 9).mask, sparsify_rows(P, 0.5, 9).mask)
    assert not np.array_equal(sparsify_rows(P, 0.5, 9).mask, sparsify_rows(P, 0.5, 10).mask)


def test_sparsify_rejects_bad_input():
    P = performance(np.ones((2, 4)))
    with pytest.raises(DataError):
        sparsify_rows(P, 0.0, 0)
    with pytest.raises(DataError):
        sparsify_rows(P, 1.5, 0)
    partial = P.with_mask(np.array([[True, False, True, True], [True] * 4]))
    with pytest.raises(DataError, match="fully observed"):
        sparsify_rows(partial, 0.5, 0)


def test_hyperparameter_key_ignores_key_order():
    a = ModelConfig("a", "gcn", {"lr": 0.01, "layers": 2})
    b = ModelConfig("b", "gcn", {"layers": 2, "lr": 0.01})
    assert a.key() == b.key()
    assert canonical_hyperparams({"z": 1, "a": [1, 2]}) == '{"a":[1,2],"z":1}'
    with pytest.raises(DataError, match="duplicate"):
        validate_catalog([a, b])


def test_model_catalog_file(tmp_path):
    models = [ModelConfig("m0", "gcn", {"layers": 2}), ModelConfig("m1", "sage", {})]
    path = str(tmp_path / "models.csv")
    save_model_catalog(models, path)
    assert load_model_catalog(path) == models


def test_model_catalog_invalid_json(tmp_path):
    path = _write(tmp_path / "models.csv", 'model_id,method,hyperparams_json\nm0,gcn,"{bad"\n')
    with pytest.raises(DataError, match="line 2"):
        load_model_catalog(path)
