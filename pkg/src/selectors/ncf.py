import logging
from typing import List

import numpy as np

from src.selectors.base import Selector, TrainCorpus, zscore, zscore_stats
from src.selectors.numerics.mlp import MLP
from src.selectors.numerics.optim import make_optimizer
from src.selectors.numerics.trainer import train_full_batch

logger = logging.getLogger(__name__)


class NCFNetwork:
    """
    Neural collaborative filtering head. Graph factors come from an encoder over
    meta-features, model factors are free parameters, and a scorer MLP maps the
    concatenated pair to a predicted performance.

    Parameter list layout: encoder params, model embedding, scorer params.
    """

    def __init__(self, d: int, m: int, latent: int, hidden: List[int], seed: int):
        rng = np.random.default_rng(seed)
        self.latent = latent
        self.encoder = MLP([d] + list(hidden) + [latent], rng=rng)
        self.scorer = MLP([2 * latent] + list(hidden) + [1], rng=rng)
        self.embedding = rng.normal(0.0, 0.1, size=(m, latent))
        self.params = self.encoder.params + [self.embedding] + self.scorer.params

    def _split(self, params):
        k = len(self.encoder.params)
        return params[:k], params[k], params[k + 1:]

    def predict(self, X: np.ndarray, params=None) -> np.ndarray:
        enc, E, sc = self._split(self.params if params is None else params)
        Z, _ = self.encoder.forward(X, enc)
        n, m = Z.shape[0], E.shape[0]
        pairs = np.concatenate([np.repeat(Z, m, axis=0), np.tile(E, (n, 1))], axis=1)
        out, _ = self.scorer.forward(pairs, sc)
        return out.reshape(n, m)

    def objective(self, X: np.ndarray, Y: np.ndarray, mask: np.ndarray):
        rows, cols = np.nonzero(mask)
        target = Y[rows, cols]
        count = max(rows.size, 1)
        L = self.latent

        def loss_and_grads(params):
            enc, E, sc = self._split(params)
            Z, enc_cache = self.encoder.forward(X, enc)
            pairs = np.concatenate([Z[rows], E[cols]], axis=1)
            out, sc_cache = self.scorer.forward(pairs, sc)
            diff = out[:, 0] - target
            loss = float((diff ** 2).sum() / count)
            sc_grads, d_pairs = self.scorer.backward((2.0 * diff / count)[:, None], sc_cache, sc)
            dZ = np.zeros_like(Z)
            np.add.at(dZ, rows, d_pairs[:, :L])
            dE = np.zeros_like(E)
            np.add.at(dE, cols, d_pairs[:, L:])
            enc_grads, _ = self.encoder.backward(dZ, enc_cache, enc)
            return loss, enc_grads + [dE] + sc_grads

        return loss_and_grads

    def state(self) -> dict:
        return {**self.encoder.state("encoder"), "embedding": self.embedding, **self.scorer.state("scorer")}

    @classmethod
    def from_state(cls, state: dict) -> "NCFNetwork":
        net = cls.__new__(cls)
        net.encoder = MLP.from_state(state, "encoder")
        net.scorer = MLP.from_state(state, "scorer")
        net.embedding = np.asarray(state["embedding"], dtype=np.float64)
        net.latent = net.embedding.shape[1]
        net.params = net.encoder.params + [net.embedding] + net.scorer.params
        return net


def build_ncf_network(corpus: TrainCorpus, config: dict, seed: int):
    mean, scale = zscore_stats(corpus.M)
    X = zscore(corpus.M, mean, scale)
    net = NCFNetwork(corpus.d, corpus.m, int(config["latent"]), list(config["hidden"]), seed)
    return net, net.objective(X, corpus.P.values, corpus.P.mask), mean, scale


class NCFSelector(Selector):
    algorithm = "ncf"

    def _fit(self, corpus, config, seed):
        net, objective, mean, scale = build_ncf_network(corpus, config, seed)
        log = train_full_batch(net.params, objective, make_optimizer(config), epochs=int(config["epochs"]),
                               patience=int(config["patience"]), tol=float(config["tol"]), name="NCF")
        state = {"feature_mean": mean, "feature_scale": scale, **net.state()}
        return state, {"epochs": log.epochs, "final_loss": log.final_loss}

    def _predict(self, model, q):
        s = model.state
        net = NCFNetwork.from_state(s)
        return net.predict(zscore(q, s["feature_mean"], s["feature_scale"])[None, :])[0]


def select_ncf(corpus: TrainCorpus, query, config: dict = None, seed: int = 0) -> np.ndarray:
    return NCFSelector().select(corpus, query, config, seed)
