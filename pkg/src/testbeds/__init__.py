"""Evaluation-split protocols over a corpus of graphs and its performance matrix."""

from .protocols import (
    Fold,
    GraphRecord,
    TestbedSplit,
    build_testbed,
    cross_task_split,
    fully_observed_splits,
    out_of_domain_splits,
    small_to_large_split,
    sparse_testbed,
)
from .store import load_testbed, save_testbed

__all__ = [
    "Fold",
    "GraphRecord",
    "TestbedSplit",
    "build_testbed",
    "cross_task_split",
    "fully_observed_splits",
    "out_of_domain_splits",
    "small_to_large_split",
    "sparse_testbed",
    "load_testbed",
    "save_testbed",
]
