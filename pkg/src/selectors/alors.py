import logging
from typing import Callable, Tuple

import numpy as np

from src.selectors.base import Selector, TrainCorpus, zscore, zscore_stats
from src.selectors.numerics.mlp import MLP, mse_objective
from src.selectors.numerics.nmf import NMFResult, masked_nmf
from src.selectors.numerics.optim import make_optimizer
from src.selectors.numerics.trainer import train_full_batch

logger = logging.getLogger(__name__)


def factorize_performance(corpus: TrainCorpus, config: dict, seed: int) -> Tuple[NMFResult, float]:
    """Masked NMF of the non-negatively shifted performance matrix."""
    rank = min(int(config["rank"]), corpus.n, corpus.m)
    shifted, shift = corpus.P.shift_nonnegative()
    return masked_nmf(shifted, corpus.P.mask, rank, seed=seed, max_iter=int(config["nmf_iter"])), shift


def build_alors_regressor(corpus: TrainCorpus, U: np.ndarray, config: dict,
                          seed: int) -> Tuple[MLP, Callable, np.ndarray, np.ndarray]:
    """Regressor from z-scored meta-features to the graph factors U."""
    mean, scale = zscore_stats(corpus.M)
    X = zscore(corpus.M, mean, scale)
    mlp = MLP([corpus.d] + list(config["hidden"]) + [U.shape[1]], seed=seed)
    return mlp, mse_objective(mlp, X, U, np.ones_like(U, dtype=bool)), mean, scale


class ALORSSelector(Selector):
    algorithm = "alors"

    def _fit(self, corpus, config, seed):
        nmf, shift = factorize_performance(corpus, config, seed)
        mlp, objective, mean, scale = build_alors_regressor(corpus, nmf.U, config, seed)
        log = train_full_batch(mlp.params, objective, make_optimizer(config), epochs=int(config["epochs"]),
                               patience=int(config["patience"]), tol=float(config["tol"]), name="ALORS")
        state = {
            "feature_mean": mean,
            "feature_scale": scale,
            "V": nmf.V,
            "shift": np.array(shift),
            **mlp.state("regressor"),
        }
        info = {"nmf_objective": nmf.objective_history[-1], "epochs": log.epochs, "final_loss": log.final_loss}
        return state, info

    def _predict(self, model, q):
        s = model.state
        mlp = MLP.from_state(s, "regressor")
        u = mlp.predict(zscore(q, s["feature_mean"], s["feature_scale"])[None, :])[0]
        return u @ s["V"].T - float(s["shift"])


def select_alors(corpus: TrainCorpus, query, config: dict = None, seed: int = 0) -> np.ndarray:
    return ALORSSelector().select(corpus, query, config, seed)
