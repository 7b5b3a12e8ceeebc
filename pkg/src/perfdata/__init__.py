"""Performance matrices, model catalogs and row sparsification."""

from .catalog import ModelConfig, canonical_hyperparams, load_model_catalog, save_model_catalog
from .matrix import (
    PerformanceMatrix,
    load_performance_matrix,
    masked_column_means,
    observed_per_row,
    save_performance_matrix,
    sparsify_rows,
)

__all__ = [
    "ModelConfig",
    "canonical_hyperparams",
    "load_model_catalog",
    "save_model_catalog",
    "PerformanceMatrix",
    "load_performance_matrix",
    "masked_column_means",
    "observed_per_row",
    "save_performance_matrix",
    "sparsify_rows",
]
