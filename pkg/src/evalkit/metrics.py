"""
Top-1 model-selection metrics.

Every metric compares a score vector (higher = better) with the index of the
true best model. The true best index is taken with ties resolved to the lowest
index (`best_model_index`). MAP with a single relevant model equals MRR.
"""

import numpy as np


def best_model_index(perfs: np.ndarray) -> int:
    return int(np.argmax(np.asarray(perfs, dtype=np.float64)))


def _tie_counts(scores: np.ndarray, best_index: int):
    scores = np.asarray(scores, dtype=np.float64)
    target = scores[best_index]
    higher = int(np.sum(scores > target))
    lower = int(np.sum(scores < target))
    tied = scores.size - higher - lower - 1
    return higher, lower, tied


def top1_auc(scores: np.ndarray, best_index: int) -> float:
    """ROC AUC of scores against the one-hot best-model label; tied pairs count 0.5."""
    higher, lower, tied = _tie_counts(scores, best_index)
    negatives = higher + lower + tied
    if negatives == 0:
        return 1.0
    return (lower + 0.5 * tied) / negatives


def mrr(scores: np.ndarray, best_index: int) -> float:
    """Reciprocal rank of the best model; a tie group shares its average rank."""
    higher, _, tied = _tie_counts(scores, best_index)
    return 1.0 / (1.0 + higher + tied / 2.0)


def map_score(scores: np.ndarray, best_index: int) -> float:
    return mrr(scores, best_index)


def ndcg_at_1(scores: np.ndarray, perfs: np.ndarray) -> float:
    """Relevance of the predicted top model over the best relevance, with relevance = perfs - min(perfs)."""
    perfs = np.asarray(perfs, dtype=np.float64)
    relevance = perfs - perfs.min()
    best = relevance.max()
    if best == 0:
        return 1.0
    return float(relevance[int(np.argmax(np.asarray(scores, dtype=np.float64)))] / best)


def score_metrics(scores: np.ndarray, perfs: np.ndarray) -> dict:
    best = best_model_index(perfs)
    return {
        "auc": top1_auc(scores, best),
        "mrr": mrr(scores, best),
        "map": map_score(scores, best),
        "ndcg1": ndcg_at_1(scores, perfs),
    }
