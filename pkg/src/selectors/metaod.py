import logging

import numpy as np

from src.selectors.base import Selector, TrainCorpus
from src.selectors.numerics.forest import ForestArrays, fit_forest
from src.selectors.numerics.losses import listwise_top1
from src.selectors.numerics.optim import make_optimizer
from src.selectors.numerics.trainer import train_full_batch

logger = logging.getLogger(__name__)


def rank_factor_objective(values: np.ndarray, mask: np.ndarray, temperature: float):
    """Top-one cross-entropy of U V^T against the observed rows; params are [U, V]."""

    def loss_and_grads(params):
        U, V = params
        loss, dS = listwise_top1(U @ V.T, values, mask, temperature)
        return loss, [dS @ V, dS.T @ U]

    return loss_and_grads


class MetaODSelector(Selector):
    """
    Factorizes P under a listwise ranking surrogate, then regresses graph factors
    from meta-features with a random forest.
    """

    algorithm = "metaod"

    def _fit(self, corpus, config, seed):
        rank = min(int(config["rank"]), corpus.n, corpus.m)
        rng = np.random.default_rng(seed)
        params = [rng.normal(0.0, 0.1, size=(corpus.n, rank)), rng.normal(0.0, 0.1, size=(corpus.m, rank))]
        objective = rank_factor_objective(corpus.P.values, corpus.P.mask, float(config["temperature"]))
        log = train_full_batch(params, objective, make_optimizer(config), epochs=int(config["epochs"]),
                               patience=int(config["patience"]), tol=float(config["tol"]), name="MetaOD-style")
        U, V = params
        forest = fit_forest(corpus.M, U, n_estimators=int(config["n_estimators"]),
                            max_depth=int(config["max_depth"]), seed=seed)
        state = {"V": V, **forest.state("forest")}
        return state, {"epochs": log.epochs, "final_loss": log.final_loss}

    def _predict(self, model, q):
        forest = ForestArrays.from_state(model.state, "forest")
        return forest.predict(q[None, :])[0] @ model.state["V"].T


def select_metaod(corpus: TrainCorpus, query, config: dict = None, seed: int = 0) -> np.ndarray:
    return MetaODSelector().select(corpus, query, config, seed)
