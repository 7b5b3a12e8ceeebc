"""
MetaGL-lite: a two-relation-type message-passing encoder over the G-M network.

Graph nodes and model nodes are linked by three kinds of edges:
  - graph-model, weighted by observed (non-negatively shifted) performance
  - graph-graph, to the top-k most cosine-similar graphs by z-scored meta-features
  - model-model, to the top-k most cosine-similar mean-filled performance columns
Each layer applies a self transform plus one linear transform per incoming
relation to degree-normalized neighbour means. Graph-model scores are dot
products of the final embeddings, trained with the top-one listwise loss.
A query graph is attached through graph-graph edges only and receives messages
without sending any, so training embeddings are unaffected by it.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.selectors.base import Selector, TrainCorpus, cosine_similarity_matrix, zscore, zscore_stats
from src.selectors.numerics.losses import listwise_top1, masked_softmax
from src.selectors.numerics.mlp import relu, relu_grad
from src.selectors.numerics.optim import make_optimizer
from src.selectors.numerics.trainer import train_full_batch

logger = logging.getLogger(__name__)

LAYER_WEIGHTS = ("g_self", "g_gg", "g_gm", "g_bias", "m_self", "m_mm", "m_mg", "m_bias")


def top_k_neighbors(similarity: np.ndarray, k: int) -> List[np.ndarray]:
    """Per row, the indices of the k most similar other rows (ties by lower index), self excluded."""
    n = similarity.shape[0]
    k = min(k, n - 1)
    out = []
    for i in range(n):
        order = np.argsort(-similarity[i], kind="stable")
        out.append(order[order != i][:k])
    return out


def neighbor_mean_operator(neighbors: List[np.ndarray], n_cols: int) -> np.ndarray:
    A = np.zeros((len(neighbors), n_cols))
    for i, idx in enumerate(neighbors):
        if idx.size:
            A[i, idx] = 1.0 / idx.size
    return A


def row_normalize(W: np.ndarray) -> np.ndarray:
    totals = W.sum(axis=1, keepdims=True)
    return np.divide(W, totals, out=np.zeros_like(W), where=totals > 0)


@dataclass(frozen=True)
class GMNetwork:
    """Dense, row-normalized relation operators of the G-M network."""

    gg: np.ndarray  # graphs <- graphs
    gm: np.ndarray  # graphs <- models
    mg: np.ndarray  # models <- graphs
    mm: np.ndarray  # models <- models


def performance_weights(corpus: TrainCorpus) -> np.ndarray:
    """Shifted observed performances; an observed row or column summing to 0 falls back to unit weights."""
    shifted, _ = corpus.P.shift_nonnegative()
    mask = corpus.P.mask
    weights = np.where(mask, shifted, 0.0)
    dead_rows = (weights.sum(axis=1) == 0) & mask.any(axis=1)
    weights[dead_rows] = mask[dead_rows].astype(np.float64)
    dead_cols = (weights.sum(axis=0) == 0) & mask.any(axis=0)
    weights[:, dead_cols] = mask[:, dead_cols].astype(np.float64)
    return weights


def build_gm_network(corpus: TrainCorpus, X: np.ndarray, top_k: int) -> GMNetwork:
    weights = performance_weights(corpus)
    graph_neighbors = top_k_neighbors(cosine_similarity_matrix(X, X), top_k)
    columns = corpus.P.filled().T
    model_neighbors = top_k_neighbors(cosine_similarity_matrix(columns, columns), top_k)
    return GMNetwork(
        gg=neighbor_mean_operator(graph_neighbors, corpus.n),
        gm=row_normalize(weights),
        mg=row_normalize(weights.T),
        mm=neighbor_mean_operator(model_neighbors, corpus.m),
    )


def attach_query(network: GMNetwork, X_train: np.ndarray, xq: np.ndarray, top_k: int) -> GMNetwork:
    """Extend the network by one graph node linked to its top-k training graphs."""
    n = X_train.shape[0]
    sims = cosine_similarity_matrix(xq[None, :], X_train)[0]
    neighbors = np.argsort(-sims, kind="stable")[:min(top_k, n)]
    gg = np.zeros((n + 1, n + 1))
    gg[:n, :n] = network.gg
    gg[n, neighbors] = 1.0 / neighbors.size
    gm = np.vstack([network.gm, np.zeros((1, network.gm.shape[1]))])
    mg = np.hstack([network.mg, np.zeros((network.mg.shape[0], 1))])
    return GMNetwork(gg=gg, gm=gm, mg=mg, mm=network.mm)


class MetaGLNetwork:
    """
    Parameter list layout: [W_in, b_in, model_embedding] followed by the eight
    arrays of LAYER_WEIGHTS for every layer.
    """

    def __init__(self, d: int, m: int, embedding: int, layers: int, seed: int):
        rng = np.random.default_rng(seed)
        E = embedding
        self.layers = layers
        self.params: List[np.ndarray] = [
            rng.normal(0.0, np.sqrt(1.0 / max(d, 1)), size=(d, E)),
            np.zeros(E),
            rng.normal(0.0, np.sqrt(1.0 / E), size=(m, E)),
        ]
        scale = np.sqrt(1.0 / (3 * E))
        for _ in range(layers):
            for name in LAYER_WEIGHTS:
                if name.endswith("bias"):
                    self.params.append(np.zeros(E))
                else:
                    self.params.append(rng.normal(0.0, scale, size=(E, E)))

    def _layer(self, params, layer: int) -> Dict[str, np.ndarray]:
        start = 3 + layer * len(LAYER_WEIGHTS)
        return dict(zip(LAYER_WEIGHTS, params[start:start + len(LAYER_WEIGHTS)]))

    def forward(self, params, X: np.ndarray, net: GMNetwork):
        W_in, b_in, model_embedding = params[:3]
        Hg = X @ W_in + b_in
        Hm = model_embedding
        cache = []
        for layer in range(self.layers):
            w = self._layer(params, layer)
            agg_gg, agg_gm = net.gg @ Hg, net.gm @ Hm
            agg_mm, agg_mg = net.mm @ Hm, net.mg @ Hg
            Zg = Hg @ w["g_self"] + agg_gg @ w["g_gg"] + agg_gm @ w["g_gm"] + w["g_bias"]
            Zm = Hm @ w["m_self"] + agg_mm @ w["m_mm"] + agg_mg @ w["m_mg"] + w["m_bias"]
            cache.append((Hg, Hm, agg_gg, agg_gm, agg_mm, agg_mg, Zg, Zm))
            last = layer == self.layers - 1
            Hg, Hm = (Zg, Zm) if last else (relu(Zg), relu(Zm))
        return Hg, Hm, cache

    def scores(self, params, X: np.ndarray, net: GMNetwork) -> np.ndarray:
        Hg, Hm, _ = self.forward(params, X, net)
        return Hg @ Hm.T

    def objective(self, X: np.ndarray, net: GMNetwork, values: np.ndarray, mask: np.ndarray,
                  temperature: float = 1.0):
        def loss_and_grads(params):
            Hg, Hm, cache = self.forward(params, X, net)
            loss, dS = listwise_top1(Hg @ Hm.T, values, mask, temperature)
            grads: List[np.ndarray] = [None] * len(params)
            dHg, dHm = dS @ Hm, dS.T @ Hg
            for layer in reversed(range(self.layers)):
                w = self._layer(params, layer)
                Hg_in, Hm_in, agg_gg, agg_gm, agg_mm, agg_mg, Zg, Zm = cache[layer]
                if layer < self.layers - 1:
                    dHg = dHg * relu_grad(Zg)
                    dHm = dHm * relu_grad(Zm)
                start = 3 + layer * len(LAYER_WEIGHTS)
                layer_grads = {
                    "g_self": Hg_in.T @ dHg, "g_gg": agg_gg.T @ dHg, "g_gm": agg_gm.T @ dHg,
                    "g_bias": dHg.sum(axis=0),
                    "m_self": Hm_in.T @ dHm, "m_mm": agg_mm.T @ dHm, "m_mg": agg_mg.T @ dHm,
                    "m_bias": dHm.sum(axis=0),
                }
                for offset, name in enumerate(LAYER_WEIGHTS):
                    grads[start + offset] = layer_grads[name]
                dHg, dHm = (
                    dHg @ w["g_self"].T + net.gg.T @ (dHg @ w["g_gg"].T) + net.mg.T @ (dHm @ w["m_mg"].T),
                    dHm @ w["m_self"].T + net.mm.T @ (dHm @ w["m_mm"].T) + net.gm.T @ (dHg @ w["g_gm"].T),
                )
            grads[0] = X.T @ dHg
            grads[1] = dHg.sum(axis=0)
            grads[2] = dHm
            return loss, grads

        return loss_and_grads

    def state(self) -> Dict[str, np.ndarray]:
        return {f"gnn.{i}": p for i, p in enumerate(self.params)}

    @classmethod
    def from_state(cls, state: Dict[str, np.ndarray], layers: int) -> "MetaGLNetwork":
        net = cls.__new__(cls)
        net.layers = layers
        net.params = [np.asarray(state[f"gnn.{i}"], dtype=np.float64) for i in range(3 + layers * len(LAYER_WEIGHTS))]
        return net


def build_metagl_network(corpus: TrainCorpus, config: dict, seed: int):
    mean, scale = zscore_stats(corpus.M)
    X = zscore(corpus.M, mean, scale)
    network = build_gm_network(corpus, X, int(config["top_k"]))
    net = MetaGLNetwork(corpus.d, corpus.m, int(config["embedding"]), int(config["layers"]), seed)
    objective = net.objective(X, network, corpus.P.values, corpus.P.mask, float(config.get("temperature", 1.0)))
    return net, objective, network, X, mean, scale


class MetaGLLiteSelector(Selector):
    algorithm = "metagl_lite"

    def _fit(self, corpus, config, seed):
        net, objective, network, X, mean, scale = build_metagl_network(corpus, config, seed)
        log = train_full_batch(net.params, objective, make_optimizer(config), epochs=int(config["epochs"]),
                               patience=int(config["patience"]), tol=float(config["tol"]), name="MetaGL-lite")
        state = {
            "feature_mean": mean,
            "feature_scale": scale,
            "train_features": X,
            "gg": network.gg,
            "gm": network.gm,
            "mg": network.mg,
            "mm": network.mm,
            **net.state(),
        }
        return state, {"epochs": log.epochs, "final_loss": log.final_loss}

    def _predict(self, model, q):
        s = model.state
        net = MetaGLNetwork.from_state(s, int(model.config["layers"]))
        network = GMNetwork(gg=s["gg"], gm=s["gm"], mg=s["mg"], mm=s["mm"])
        xq = zscore(q, s["feature_mean"], s["feature_scale"])
        extended = attach_query(network, s["train_features"], xq, int(model.config["top_k"]))
        X = np.vstack([s["train_features"], xq[None, :]])
        return net.scores(net.params, X, extended)[-1]

    def top1_probabilities(self, model, query) -> np.ndarray:
        """Softmax over the predicted scores of observed models."""
        scores = self.predict(model, query)
        observed = np.isfinite(scores)
        return masked_softmax(np.where(observed, scores, 0.0)[None, :], observed[None, :])[0]


def select_metagl_lite(corpus: TrainCorpus, query, config: dict = None, seed: int = 0) -> np.ndarray:
    return MetaGLLiteSelector().select(corpus, query, config, seed)
