"""Instantaneous model-selection algorithms."""

from .alors import select_alors
from .argosmart import select_argosmart
from .base import Selector, SelectorModel, TrainCorpus
from .baselines import select_gb_avgperf, select_gb_avgrank, select_random
from .bundle import load_bundle, save_bundle
from .isac import select_isac
from .metagl import select_metagl_lite
from .metaod import select_metaod
from .ncf import select_ncf
from .registry import algorithm_ids, display_name, get_selector, parse_algorithms
from .s2 import select_s2

__all__ = [
    "Selector",
    "SelectorModel",
    "TrainCorpus",
    "select_random",
    "select_gb_avgperf",
    "select_gb_avgrank",
    "select_isac",
    "select_argosmart",
    "select_s2",
    "select_alors",
    "select_ncf",
    "select_metaod",
    "select_metagl_lite",
    "load_bundle",
    "save_bundle",
    "algorithm_ids",
    "display_name",
    "get_selector",
    "parse_algorithms",
]
