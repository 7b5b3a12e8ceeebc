from .forest import ForestArrays, fit_forest
from .gradcheck import gradient_check
from .kmeans import KMeansResult, kmeans, nearest_centroid
from .losses import listwise_top1, masked_mse, masked_softmax
from .mlp import MLP
from .nmf import NMFResult, masked_frobenius, masked_nmf
from .optim import SGD, Adam, make_optimizer
from .trainer import TrainingLog, train_full_batch

__all__ = [
    "ForestArrays",
    "fit_forest",
    "gradient_check",
    "KMeansResult",
    "kmeans",
    "nearest_centroid",
    "listwise_top1",
    "masked_mse",
    "masked_softmax",
    "MLP",
    "NMFResult",
    "masked_frobenius",
    "masked_nmf",
    "SGD",
    "Adam",
    "make_optimizer",
    "TrainingLog",
    "train_full_batch",
]
