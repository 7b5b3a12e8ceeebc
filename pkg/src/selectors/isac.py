import logging

import numpy as np

from src.perfdata.matrix import masked_column_means
from src.selectors.base import Selector, TrainCorpus, zscore, zscore_stats
from src.selectors.numerics.kmeans import kmeans, nearest_centroid

logger = logging.getLogger(__name__)


class ISACSelector(Selector):
    """
    Clusters the training graphs by z-scored meta-features; a query inherits the
    mean observed performances of its nearest cluster.
    """

    algorithm = "isac"

    def _fit(self, corpus, config, seed):
        k = int(config["k"])
        if k > corpus.n:
            logger.warning(f"ISAC: k={k} exceeds {corpus.n} training graphs, using k={corpus.n}")
            k = corpus.n
        mean, scale = zscore_stats(corpus.M)
        result = kmeans(zscore(corpus.M, mean, scale), k, seed=seed, max_iter=int(config["max_iter"]))

        P = corpus.P
        global_means = P.column_means()
        cluster_scores = np.empty((k, P.m), dtype=np.float64)
        for c in range(k):
            members = result.assignments == c
            means = masked_column_means(P.values[members], P.mask[members], empty=np.nan)
            cluster_scores[c] = np.where(np.isnan(means), global_means, means)
        state = {
            "feature_mean": mean,
            "feature_scale": scale,
            "centroids": result.centroids,
            "cluster_scores": cluster_scores,
        }
        return state, {"inertia": result.inertia, "k": k}

    def _predict(self, model, q):
        s = model.state
        cluster = int(nearest_centroid(zscore(q, s["feature_mean"], s["feature_scale"]), s["centroids"])[0])
        return s["cluster_scores"][cluster]


def select_isac(corpus: TrainCorpus, query, k: int = 5, seed: int = 0) -> np.ndarray:
    return ISACSelector().select(corpus, query, config={"k": k}, seed=seed)
