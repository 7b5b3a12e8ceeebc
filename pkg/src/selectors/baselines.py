"""Query-independent baselines: random scores and global averages over the corpus."""

import zlib

import numpy as np
from scipy.stats import rankdata

from src.perfdata.matrix import masked_column_means
from src.selectors.base import Selector, TrainCorpus


class RandomSelector(Selector):
    """i.i.d. uniform scores, a deterministic function of (seed, query)."""

    algorithm = "randsel"

    def _fit(self, corpus, config, seed):
        return {}, {}

    def _predict(self, model, q):
        digest = zlib.crc32(np.ascontiguousarray(q, dtype=np.float64).tobytes())
        rng = np.random.default_rng([model.seed, digest])
        return rng.uniform(0.0, 1.0, size=model.m)


class GlobalAvgPerfSelector(Selector):
    algorithm = "gb_avgperf"

    def _fit(self, corpus, config, seed):
        return {"scores": corpus.P.column_means()}, {}

    def _predict(self, model, q):
        return model.state["scores"]


def rank_percentiles(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per row, ascending rank of each observed entry over the row's observed count (best = 1.0)."""
    out = np.zeros(values.shape, dtype=np.float64)
    for i in range(values.shape[0]):
        observed = np.nonzero(mask[i])[0]
        if observed.size:
            out[i, observed] = rankdata(values[i, observed], method="average") / observed.size
    return out


class GlobalAvgRankSelector(Selector):
    algorithm = "gb_avgrank"

    def _fit(self, corpus, config, seed):
        P = corpus.P
        return {"scores": masked_column_means(rank_percentiles(P.values, P.mask), P.mask)}, {}

    def _predict(self, model, q):
        return model.state["scores"]


def select_random(corpus: TrainCorpus, query, seed: int) -> np.ndarray:
    return RandomSelector().select(corpus, query, seed=seed)


def select_gb_avgperf(corpus: TrainCorpus, query) -> np.ndarray:
    return GlobalAvgPerfSelector().select(corpus, query)


def select_gb_avgrank(corpus: TrainCorpus, query) -> np.ndarray:
    return GlobalAvgRankSelector().select(corpus, query)
