import logging

import numpy as np
import pytest
from sklearn.ensemble import RandomForestRegressor

from src.evalkit.report import evaluate
from src.selectors.alors import build_alors_regressor, factorize_performance
from src.selectors.argosmart import select_argosmart
from src.selectors.base import zscore, zscore_stats
from src.selectors.baselines import (RandomSelector, rank_percentiles, select_gb_avgperf, select_gb_avgrank,
                                     select_random)
from src.selectors.bundle import load_bundle, save_bundle
from src.selectors.isac import ISACSelector, select_isac
from src.selectors.metagl import MetaGLLiteSelector, build_metagl_network, row_normalize, top_k_neighbors
from src.selectors.metaod import rank_factor_objective
from src.selectors.ncf import NCFSelector, build_ncf_network
from src.selectors.numerics import fit_forest, gradient_check, kmeans, listwise_top1, masked_nmf
from src.selectors.registry import algorithm_ids, get_selector, parse_algorithms
from src.selectors.s2 import build_s2_network, select_s2
from src.testbeds.protocols import GraphRecord, fully_observed_splits
from src.utils.config import hyperparams_for
from src.utils.errors import ConfigError, DataError
from tests.synthetic import corpus, planted_clusters, random_corpus

# small budgets keep every trainable selector fast
SMALL = {
    "randsel": {},
    "gb_avgperf": {},
    "gb_avgrank": {},
    "isac": {"k": 3},
    "argosmart": {},
    "s2": {"hidden": [8], "epochs": 30},
    "alors": {"rank": 3, "nmf_iter": 50, "hidden": [8], "epochs": 30},
    "ncf": {"latent": 4, "hidden": [8], "epochs": 30},
    "metaod": {"rank": 3, "n_estimators": 10, "max_depth": 4, "epochs": 30},
    "metagl_lite": {"embedding": 8, "layers": 2, "top_k": 5, "epochs": 30},
}


def _query(d, seed=99):
    return np.random.default_rng(seed).normal(size=d)


def test_gb_avgperf_scores_are_column_means():
    c = corpus(np.eye(2), [[0.9, 0.1], [0.7, 0.3]])
    np.testing.assert_allclose(select_gb_avgperf(c, [5.0, 5.0]), [0.8, 0.2])


def test_gb_avgperf_ignores_unobserved_cells():
    c = corpus(np.eye(2), [[0.9, 0.1], [0.0, 0.3]], [[True, True], [False, True]])
    np.testing.assert_allclose(select_gb_avgperf(c, [0.0, 1.0]), [0.9, 0.2])


def test_rank_percentiles():
    values = np.array([[0.9, 0.1, 0.5], [0.2, 0.2, 0.0]])
    mask = np.array([[True, True, True], [True, True, False]])
    np.testing.assert_allclose(rank_percentiles(values, mask), [[1.0, 1 / 3, 2 / 3], [0.75, 0.75, 0.0]])


def test_gb_avgrank_prefers_consistently_good_model():
    # model 0 wins one graph by a mile, model 1 is second-best on both
    c = corpus(np.eye(3), [[10.0, 0.5, 0.4], [0.0, 0.5, 0.6], [0.0, 0.5, 0.4]])
    assert int(np.argmax(select_gb_avgperf(c, [0, 0, 1]))) == 0
    assert int(np.argmax(select_gb_avgrank(c, [0, 0, 1]))) == 1


def test_randsel_is_deterministic_per_seed_and_query():
    c = random_corpus(5, 3, 10, seed=0)
    q = _query(3)
    np.testing.assert_array_equal(select_random(c, q, seed=1), select_random(c, q, seed=1))
    assert not np.array_equal(select_random(c, q, seed=1), select_random(c, q, seed=2))
    assert not np.array_equal(select_random(c, q, seed=1), select_random(c, q + 1.0, seed=1))


def test_randsel_top1_rate_is_one_over_m():
    c = random_corpus(4, 3, 20, seed=0)
    selector = RandomSelector()
    model = selector.fit(c, seed=0)
    queries = np.random.default_rng(5).normal(size=(10000, 3))
    hits = sum(int(np.argmax(selector.predict(model, q))) == 7 for q in queries)
    rate = hits / len(queries)
    sigma = np.sqrt(0.05 * 0.95 / len(queries))
    assert abs(rate - 0.05) < 4 * sigma


def test_kmeans_recovers_separated_blobs():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(0.0, 0.1, size=(20, 2)), rng.normal(10.0, 0.1, size=(20, 2))])
    result = kmeans(X, 2, seed=0)
    assert len(set(result.assignments[:20])) == 1
    assert len(set(result.assignments[20:])) == 1
    assert result.assignments[0] != result.assignments[20]
    history = np.array(result.inertia_history)
    assert np.all(np.diff(history) <= 1e-9 * np.maximum(history[:-1], 1.0))


def test_kmeans_rejects_bad_k():
    X = np.zeros((3, 2))
    with pytest.raises(ValueError):
        kmeans(X, 0, seed=0)
    with pytest.raises(ValueError):
        kmeans(X, 4, seed=0)


def test_isac_single_cluster_equals_global_average():
    c = random_corpus(12, 4, 6, seed=3, observed=0.6)
    q = _query(4)
    np.testing.assert_allclose(select_isac(c, q, k=1), select_gb_avgperf(c, q))


def test_isac_routes_query_to_its_cluster():
    M = np.array([[0.0, 0.0], [0.1, 0.0], [10.0, 10.0], [10.1, 10.0]])
    c = corpus(M, [[0.9, 0.1], [0.7, 0.3], [0.1, 0.8], [0.3, 0.6]])
    np.testing.assert_allclose(select_isac(c, [10.0, 9.9], k=2), [0.2, 0.7])
    np.testing.assert_allclose(select_isac(c, [0.05, 0.0], k=2), [0.8, 0.2])


def test_isac_clamps_k_to_corpus_size(caplog):
    c = random_corpus(4, 2, 3, seed=0)
    with caplog.at_level(logging.WARNING):
        model = ISACSelector().fit(c, {"k": 50})
    assert model.info["k"] == 4
    assert "exceeds" in caplog.text


def test_isac_with_one_cluster_per_graph_returns_nearest_row():
    c = random_corpus(10, 3, 5, seed=7)
    for i in range(c.n):
        np.testing.assert_allclose(select_isac(c, c.M[i], k=c.n), c.P.values[i])
    mean, scale = zscore_stats(c.M)
    for seed in range(5):
        q = _query(3, seed=seed)
        nearest = int(np.argmin(((zscore(c.M, mean, scale) - zscore(q, mean, scale)) ** 2).sum(axis=1)))
        np.testing.assert_allclose(select_isac(c, q, k=c.n), c.P.values[nearest])


def test_argosmart_tie_goes_to_lowest_index():
    # rows 1 and 2 point the same way, so both have cosine 1 with the query
    M = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 1.0]])
    c = corpus(M, [[0.9, 0.1], [0.3, 0.6], [0.6, 0.3]])
    np.testing.assert_allclose(select_argosmart(c, [0.0, 3.0]), [0.3, 0.6])


def test_argosmart_copies_nearest_row():
    M = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    c = corpus(M, [[0.9, 0.1], [0.2, 0.8], [0.5, 0.5]])
    # scaling does not change cosine similarity
    np.testing.assert_allclose(select_argosmart(c, [0.0, 7.0]), [0.2, 0.8])


def test_argosmart_fills_unobserved_cells():
    M = np.array([[1.0, 0.0], [0.0, 1.0]])
    c = corpus(M, [[0.9, 0.0, 0.5], [0.2, 0.8, 0.4]], [[True, False, True], [True, True, True]])
    scores = select_argosmart(c, [1.0, 0.0])
    np.testing.assert_allclose(scores, [0.9, 0.7, 0.5])


def test_s2_memorizes_a_single_graph():
    c = corpus(np.array([[1.0, 2.0, 3.0]]), [[0.2, 0.9, 0.4, 0.6, 0.1]])
    config = {"optimizer": "sgd", "momentum": 0.0, "lr": 0.05, "epochs": 2000}
    scores = select_s2(c, [1.0, 2.0, 3.0], config)
    assert np.mean((scores - c.P.values[0]) ** 2) < 1e-3


@pytest.mark.parametrize("seed", range(10))
def test_s2_gradients(seed):
    c = random_corpus(8, 4, 5, seed=seed, observed=0.7)
    mlp, objective, _, _ = build_s2_network(c, {"hidden": [6, 5]}, seed)
    assert gradient_check(objective, mlp.params) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_alors_regressor_gradients(seed):
    c = random_corpus(8, 4, 5, seed=seed, observed=0.7)
    config = hyperparams_for("alors", {"rank": 3, "nmf_iter": 20, "hidden": [6]})
    nmf, _ = factorize_performance(c, config, seed)
    mlp, objective, _, _ = build_alors_regressor(c, nmf.U, config, seed)
    assert gradient_check(objective, mlp.params) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_ncf_gradients(seed):
    c = random_corpus(7, 4, 5, seed=seed, observed=0.7)
    net, objective, _, _ = build_ncf_network(c, {"latent": 3, "hidden": [4]}, seed)
    assert gradient_check(objective, net.params) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_metagl_gradients(seed):
    c = random_corpus(8, 4, 5, seed=seed, observed=0.7)
    net, objective, *_ = build_metagl_network(c, {"embedding": 4, "layers": 2, "top_k": 3}, seed)
    assert gradient_check(objective, net.params) < 1e-4


def test_rank_factor_gradients():
    rng = np.random.default_rng(0)
    values = rng.uniform(size=(6, 5))
    mask = rng.random((6, 5)) < 0.7
    params = [rng.normal(0.0, 0.5, size=(6, 3)), rng.normal(0.0, 0.5, size=(5, 3))]
    assert gradient_check(rank_factor_objective(values, mask, 1.0), params) < 1e-4


def test_listwise_loss_ignores_unobserved_entries():
    scores = np.array([[1.0, 5.0, 0.0]])
    target = np.array([[0.9, 0.0, 0.1]])
    mask = np.array([[True, False, True]])
    loss, grad = listwise_top1(scores, target, mask)
    moved = scores.copy()
    moved[0, 1] = -50.0
    assert listwise_top1(moved, target, mask)[0] == pytest.approx(loss)
    assert grad[0, 1] == 0.0


def test_masked_nmf_recovers_rank_one_matrix():
    rng = np.random.default_rng(0)
    X = np.outer(rng.uniform(0.5, 1.5, 15), rng.uniform(0.5, 1.5, 8))
    mask = rng.random(X.shape) < 0.8
    result = masked_nmf(X, mask, rank=1, seed=0, max_iter=5000, tol=1e-14)
    rmse = np.sqrt(np.mean((result.reconstruct() - X)[mask] ** 2))
    assert rmse < 1e-3
    assert np.all(result.U >= 0) and np.all(result.V >= 0)


def test_masked_nmf_objective_never_increases():
    rng = np.random.default_rng(1)
    X = rng.uniform(size=(10, 7))
    mask = rng.random(X.shape) < 0.6
    history = np.array(masked_nmf(X, mask, rank=3, seed=2, max_iter=200).objective_history)
    assert np.all(np.diff(history) <= 1e-9 * np.maximum(history[:-1], 1.0))


def test_masked_nmf_rejects_negative_entries():
    X = np.array([[1.0, -1.0], [1.0, 1.0]])
    with pytest.raises(ValueError):
        masked_nmf(X, np.ones_like(X, dtype=bool), rank=1, seed=0)
    # negative entries outside the mask are never read
    masked_nmf(X, np.array([[True, False], [True, True]]), rank=1, seed=0, max_iter=5)


def test_forest_matches_scikit_learn():
    rng = np.random.default_rng(0)
    X, Y = rng.normal(size=(60, 5)), rng.normal(size=(60, 3))
    X_test = rng.normal(size=(25, 5))
    ours = fit_forest(X, Y, n_estimators=20, max_depth=5, seed=3)
    reference = RandomForestRegressor(n_estimators=20, max_depth=5, max_features="sqrt", bootstrap=True,
                                      random_state=3, n_jobs=1).fit(X, Y)
    np.testing.assert_allclose(ours.predict(X_test), reference.predict(X_test), rtol=0, atol=1e-12)


def test_single_unpruned_tree_fits_training_data():
    rng = np.random.default_rng(1)
    X, Y = rng.normal(size=(30, 4)), rng.normal(size=(30, 2))
    forest = fit_forest(X, Y, n_estimators=1, max_depth=50, seed=0, max_features=None, bootstrap=False)
    np.testing.assert_allclose(forest.predict(X), Y, atol=1e-12)


def test_top_k_neighbors_excludes_self():
    sim = np.array([[1.0, 0.2, 0.9], [0.2, 1.0, 0.2], [0.9, 0.2, 1.0]])
    neighbors = top_k_neighbors(sim, 5)
    assert [n.tolist() for n in neighbors] == [[2, 1], [0, 2], [0, 1]]


def test_row_normalize_leaves_empty_rows_zero():
    out = row_normalize(np.array([[1.0, 3.0], [0.0, 0.0]]))
    np.testing.assert_allclose(out, [[0.25, 0.75], [0.0, 0.0]])


def test_metagl_query_does_not_disturb_training_scores():
    c = random_corpus(10, 4, 6, seed=2)
    selector = MetaGLLiteSelector()
    model = selector.fit(c, SMALL["metagl_lite"], seed=0)
    first = selector.predict(model, _query(4, 1))
    selector.predict(model, _query(4, 2))
    np.testing.assert_array_equal(selector.predict(model, _query(4, 1)), first)
    probs = selector.top1_probabilities(model, _query(4, 1))
    assert probs.sum() == pytest.approx(1.0)


@pytest.mark.parametrize("algorithm", algorithm_ids())
def test_selector_is_deterministic(algorithm):
    c = random_corpus(12, 4, 6, seed=1, observed=0.8)
    q = _query(4)
    first = get_selector(algorithm).select(c, q, SMALL[algorithm], seed=3)
    second = get_selector(algorithm).select(c, q, SMALL[algorithm], seed=3)
    np.testing.assert_array_equal(first, second)
    assert first.shape == (6,)


@pytest.mark.parametrize("algorithm", algorithm_ids())
def test_bundle_reload_predicts_the_same(algorithm, tmp_path):
    c = random_corpus(12, 4, 6, seed=1, observed=0.8)
    selector = get_selector(algorithm)
    model = selector.fit(c, SMALL[algorithm], seed=0)
    save_bundle(model, str(tmp_path / algorithm))
    loaded = load_bundle(str(tmp_path / algorithm))
    assert loaded.model_ids == model.model_ids
    assert loaded.config == model.config
    q = _query(4)
    np.testing.assert_array_equal(selector.predict(loaded, q), selector.predict(model, q))


@pytest.mark.parametrize("algorithm", algorithm_ids())
def test_query_dimension_mismatch(algorithm):
    c = random_corpus(12, 4, 6, seed=1)
    selector = get_selector(algorithm)
    model = selector.fit(c, SMALL[algorithm], seed=0)
    with pytest.raises(DataError, match="expects 4"):
        selector.predict(model, np.zeros(5))


@pytest.mark.parametrize("algorithm", algorithm_ids())
def test_never_observed_model_scores_minus_infinity(algorithm):
    c = random_corpus(12, 4, 6, seed=1)
    mask = c.P.mask.copy()
    mask[:, 2] = False
    sparse = c.subset(c.P.graph_ids, mask)
    scores = get_selector(algorithm).select(sparse, _query(4), SMALL[algorithm], seed=0)
    assert scores[2] == -np.inf
    assert np.all(np.isfinite(np.delete(scores, 2)))


def test_load_bundle_requires_both_files(tmp_path):
    with pytest.raises(DataError, match="bundle"):
        load_bundle(str(tmp_path))


def test_registry():
    assert len(algorithm_ids()) == 10
    assert parse_algorithms("all") == algorithm_ids()
    assert parse_algorithms("isac, s2") == ["isac", "s2"]
    with pytest.raises(ConfigError, match="unknown algorithm"):
        parse_algorithms("isac,nope")
    with pytest.raises(ConfigError):
        get_selector("svm")


def test_hyperparams_merge_and_env_cap(monkeypatch):
    monkeypatch.setenv("GLSELECT_EPOCHS", "7")
    params = hyperparams_for("s2", {"lr": 0.5, "extra": 1})
    assert params["epochs"] == 7
    assert params["lr"] == 0.5 and params["extra"] == 1
    assert params["hidden"] == [32, 32]


def test_ncf_fits_planted_low_rank_matrix():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(50, 4))
    values = 0.5 + 0.2 * np.outer(np.tanh(M[:, 0]), rng.uniform(-1.0, 1.0, size=10))
    c = corpus(M, values)
    selector = NCFSelector()
    model = selector.fit(c, {}, seed=0)
    predicted = np.array([selector.predict(model, row) for row in M])
    assert np.sqrt(np.mean((predicted - values) ** 2)) < 0.05


PLANTED_ALGORITHMS = ["randsel", "gb_avgperf", "isac", "argosmart", "alors", "metagl_lite", "metaod"]
PLANTED_REPETITIONS = 3


@pytest.fixture(scope="module")
def planted_benchmark():
    """Mean MRR and NDCG@1 per algorithm under stratified 5-fold, averaged over seeded planted corpora."""
    totals = {algorithm: {"mrr": [], "ndcg1": []} for algorithm in PLANTED_ALGORITHMS}
    for rep in range(PLANTED_REPETITIONS):
        planted = planted_clusters(seed=rep)
        records = [GraphRecord(graph_id, domain, 100)
                   for graph_id, domain in zip(planted.P.graph_ids, planted.domains)]
        split = fully_observed_splits(records, seed=rep)
        reports, _ = evaluate(split, planted.features, planted.P, PLANTED_ALGORITHMS,
                              configs={"metagl_lite": {"top_k": 10}}, seed=rep)
        for report in reports:
            for metric, values in totals[report.algorithm].items():
                values.append(report.mean(metric))
    return {algorithm: {metric: float(np.mean(values)) for metric, values in metrics.items()}
            for algorithm, metrics in totals.items()}


@pytest.mark.slow
@pytest.mark.parametrize("algorithm", ["isac", "argosmart", "alors", "metagl_lite"])
def test_planted_clusters_are_recovered(planted_benchmark, algorithm):
    assert planted_benchmark[algorithm]["mrr"] >= 0.60


@pytest.mark.slow
def test_planted_baselines_stay_below_cluster_aware_selectors(planted_benchmark):
    assert planted_benchmark["gb_avgperf"]["mrr"] <= 0.40
    assert planted_benchmark["randsel"]["mrr"] <= 0.30


@pytest.mark.slow
def test_planted_metaod_at_least_doubles_random(planted_benchmark):
    assert planted_benchmark["metaod"]["mrr"] >= 2 * planted_benchmark["randsel"]["mrr"]


@pytest.mark.slow
def test_planted_metagl_ndcg_matches_global_best(planted_benchmark):
    assert planted_benchmark["metagl_lite"]["ndcg1"] >= planted_benchmark["gb_avgperf"]["ndcg1"]
