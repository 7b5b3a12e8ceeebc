import numpy as np

from src.selectors.base import Selector, SelectorModel, TrainCorpus, cosine_similarity_matrix


def nearest_training_graph(model: SelectorModel, q: np.ndarray) -> int:
    """Training row with the highest cosine similarity to `q`; ties go to the lowest index."""
    return int(np.argmax(cosine_similarity_matrix(q[None, :], model.state["features"])[0]))


class ArgoSmartSelector(Selector):
    """1-nearest-neighbour by cosine similarity of raw meta-features."""

    algorithm = "argosmart"

    def _fit(self, corpus, config, seed):
        return {"features": corpus.M.copy(), "rows": corpus.P.filled()}, {}

    def _predict(self, model, q):
        return model.state["rows"][nearest_training_graph(model, q)]


def select_argosmart(corpus: TrainCorpus, query) -> np.ndarray:
    return ArgoSmartSelector().select(corpus, query)
