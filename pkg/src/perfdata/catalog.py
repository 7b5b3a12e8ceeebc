import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def canonical_hyperparams(hyperparameters: Dict[str, Any]) -> str:
    """Sorted-key, whitespace-free JSON used as the identity of a hyperparameter setting."""
    return json.dumps(hyperparameters, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ModelConfig:
    """A graph-learning method together with one hyperparameter setting."""

    model_id: str
    method: str
    hyperparameters: Dict[str, Any] = field(default_factory=dict)

    def key(self) -> str:
        """Cross-catalog matching key: method name plus canonical hyperparameters."""
        return f"{self.method}|{canonical_hyperparams(self.hyperparameters)}"


def validate_catalog(models: List[ModelConfig]) -> None:
    ids, keys = set(), set()
    for model in models:
        if model.model_id in ids:
            raise DataError(f"duplicate model_id {model.model_id!r}")
        if model.key() in keys:
            raise DataError(f"duplicate (method, hyperparameters) for {model.model_id!r}")
        ids.add(model.model_id)
        keys.add(model.key())


def load_model_catalog(path: str) -> List[ModelConfig]:
    """Read `model_id,method,hyperparams_json`."""
    if not os.path.exists(path):
        raise DataError("model catalog not found", path=path)
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    required = {"model_id", "method", "hyperparams_json"}
    if not required.issubset(df.columns):
        raise DataError(f"model catalog needs columns {sorted(required)}", path=path, line=1)
    models = []
    for line_no, row in enumerate(df.itertuples(index=False), start=2):
        try:
            hp = json.loads(row.hyperparams_json or "{}")
        except json.JSONDecodeError as e:
            raise DataError(f"invalid hyperparams_json: {e.msg}", path=path, line=line_no) from None
        if not isinstance(hp, dict):
            raise DataError("hyperparams_json must be a JSON object", path=path, line=line_no)
        models.append(ModelConfig(model_id=row.model_id, method=row.method, hyperparameters=hp))
    try:
        validate_catalog(models)
    except DataError as e:
        raise DataError(str(e), path=path) from None
    logger.info(f"Loaded model catalog {path}: {len(models)} models")
    return models


def save_model_catalog(models: List[ModelConfig], path: str) -> None:
    validate_catalog(models)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df = pd.DataFrame({
        "model_id": [m.model_id for m in models],
        "method": [m.method for m in models],
        "hyperparams_json": [canonical_hyperparams(m.hyperparameters) for m in models],
    })
    df.to_csv(path, index=False, lineterminator="\n")


def catalog_by_id(models: List[ModelConfig]) -> Dict[str, ModelConfig]:
    return {model.model_id: model for model in models}
