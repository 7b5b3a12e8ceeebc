"""
Fitted selector bundles: `state.npz` holds every learned array, `manifest.json`
records the algorithm, config, seed, schema and candidate model ids.
"""

import json
import logging
import os

import numpy as np

from src.selectors.base import SelectorModel
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MANIFEST = "manifest.json"
STATE = "state.npz"


def save_bundle(model: SelectorModel, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    np.savez(os.path.join(directory, STATE), **{k: np.asarray(v) for k, v in model.state.items()})
    manifest = {
        "format_version": FORMAT_VERSION,
        "algorithm": model.algorithm,
        "config": model.config,
        "seed": model.seed,
        "schema": model.schema,
        "feature_dim": model.feature_dim,
        "model_ids": model.model_ids,
        "info": model.info,
    }
    with open(os.path.join(directory, MANIFEST), "w", encoding="utf-8") as fw:
        json.dump(manifest, fw, indent=2, sort_keys=True)
    logger.info(f"Saved {model.algorithm} bundle to {directory}")
    return directory


def load_bundle(directory: str) -> SelectorModel:
    manifest_path = os.path.join(directory, MANIFEST)
    state_path = os.path.join(directory, STATE)
    if not (os.path.exists(manifest_path) and os.path.exists(state_path)):
        raise DataError("not a selector bundle (manifest.json and state.npz required)", path=directory)
    with open(manifest_path, "r", encoding="utf-8") as fr:
        try:
            manifest = json.load(fr)
        except json.JSONDecodeError as e:
            raise DataError(f"invalid manifest: {e.msg}", path=manifest_path, line=e.lineno) from None
    if manifest.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported bundle format {manifest.get('format_version')!r}", path=manifest_path)
    with np.load(state_path, allow_pickle=False) as data:
        state = {k: data[k] for k in data.files}
    return SelectorModel(
        algorithm=manifest["algorithm"],
        state=state,
        config=manifest["config"],
        seed=int(manifest["seed"]),
        model_ids=list(manifest["model_ids"]),
        schema=manifest["schema"],
        feature_dim=int(manifest["feature_dim"]),
        info=manifest.get("info", {}),
    )
