import logging
from typing import Callable, Tuple

import numpy as np

from src.selectors.base import Selector, TrainCorpus, zscore, zscore_stats
from src.selectors.numerics.mlp import MLP, mse_objective
from src.selectors.numerics.optim import make_optimizer
from src.selectors.numerics.trainer import train_full_batch

logger = logging.getLogger(__name__)


def build_s2_network(corpus: TrainCorpus, config: dict, seed: int) -> Tuple[MLP, Callable, np.ndarray, np.ndarray]:
    """Surrogate regressor d -> hidden -> m and its masked-MSE objective."""
    mean, scale = zscore_stats(corpus.M)
    X = zscore(corpus.M, mean, scale)
    mlp = MLP([corpus.d] + list(config["hidden"]) + [corpus.m], seed=seed)
    objective = mse_objective(mlp, X, corpus.P.values, corpus.P.mask)
    return mlp, objective, mean, scale


class S2Selector(Selector):
    algorithm = "s2"

    def _fit(self, corpus, config, seed):
        mlp, objective, mean, scale = build_s2_network(corpus, config, seed)
        log = train_full_batch(mlp.params, objective, make_optimizer(config), epochs=int(config["epochs"]),
                               patience=int(config["patience"]), tol=float(config["tol"]), name="S2")
        state = {"feature_mean": mean, "feature_scale": scale, **mlp.state("net")}
        return state, {"epochs": log.epochs, "final_loss": log.final_loss}

    def _predict(self, model, q):
        s = model.state
        mlp = MLP.from_state(s, "net")
        return mlp.predict(zscore(q, s["feature_mean"], s["feature_scale"])[None, :])[0]


def select_s2(corpus: TrainCorpus, query, config: dict = None, seed: int = 0) -> np.ndarray:
    return S2Selector().select(corpus, query, config, seed)
