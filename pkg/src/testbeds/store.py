import json
import logging
import os

import numpy as np
import pandas as pd

from src.testbeds.protocols import Fold, TestbedSplit
from src.utils.errors import DataError

logger = logging.getLogger(__name__)


def mask_path(path: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}.mask{ext or '.csv'}"


def manifest_path(path: str) -> str:
    return f"{path}.meta.json"


def save_testbed(split: TestbedSplit, path: str) -> None:
    """
    `fold,role,graph_id` rows in fold order; sparse training masks go to a
    companion `fold,graph_id,model_id` file listing the observed training cells.
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    rows = []
    for fold in split.folds:
        rows += [(fold.index, "train", g) for g in fold.train_ids]
        rows += [(fold.index, "test", g) for g in fold.test_ids]
    pd.DataFrame(rows, columns=["fold", "role", "graph_id"]).to_csv(path, index=False, lineterminator="\n")

    masked = [f for f in split.folds if f.train_mask is not None]
    if masked:
        cells = []
        for fold in masked:
            for r, c in np.argwhere(fold.train_mask):
                cells.append((fold.index, fold.train_ids[r], split.model_ids[c]))
        pd.DataFrame(cells, columns=["fold", "graph_id", "model_id"]).to_csv(
            mask_path(path), index=False, lineterminator="\n")

    manifest = {
        "testbed": split.testbed,
        "seed": split.seed,
        "params": split.params,
        "model_ids": list(split.model_ids),
        "test_model_ids": list(split.test_model_ids),
        "fold_params": [f.params for f in split.folds],
        "masked": bool(masked),
    }
    with open(manifest_path(path), "w", encoding="utf-8") as fw:
        json.dump(manifest, fw, indent=2, sort_keys=True)
    logger.info(f"Saved {split.testbed} testbed ({len(split.folds)} folds) to {path}")


def load_testbed(path: str) -> TestbedSplit:
    if not os.path.exists(path) or not os.path.exists(manifest_path(path)):
        raise DataError("testbed split or its manifest not found", path=path)
    with open(manifest_path(path), "r", encoding="utf-8") as fr:
        manifest = json.load(fr)
    df = pd.read_csv(path, dtype={"fold": int, "role": str, "graph_id": str}, keep_default_na=False)
    if list(df.columns) != ["fold", "role", "graph_id"]:
        raise DataError("split header must be fold,role,graph_id", path=path, line=1)
    bad = ~df["role"].isin(["train", "test"])
    if bad.any():
        raise DataError(f"unknown role {df.loc[bad, 'role'].iloc[0]!r}", path=path, line=int(bad.idxmax()) + 2)

    model_ids = tuple(manifest.get("model_ids", []))
    masks = None
    if manifest.get("masked"):
        masks = pd.read_csv(mask_path(path), dtype={"fold": int, "graph_id": str, "model_id": str},
                            keep_default_na=False)
    column = {mid: j for j, mid in enumerate(model_ids)}

    folds = []
    fold_params = manifest.get("fold_params", [])
    for k in sorted(df["fold"].unique()):
        part = df[df["fold"] == k]
        train = tuple(part.loc[part["role"] == "train", "graph_id"])
        test = tuple(part.loc[part["role"] == "test", "graph_id"])
        train_mask = None
        if masks is not None:
            row = {g: i for i, g in enumerate(train)}
            train_mask = np.zeros((len(train), len(model_ids)), dtype=bool)
            for cell in masks[masks["fold"] == k].itertuples(index=False):
                if cell.graph_id not in row or cell.model_id not in column:
                    raise DataError(f"mask cell ({cell.graph_id}, {cell.model_id}) outside fold {k}",
                                    path=mask_path(path))
                train_mask[row[cell.graph_id], column[cell.model_id]] = True
        params = fold_params[int(k)] if int(k) < len(fold_params) else {}
        folds.append(Fold(index=int(k), train_ids=train, test_ids=test, train_mask=train_mask, params=params))
    return TestbedSplit(
        testbed=manifest["testbed"],
        folds=folds,
        seed=int(manifest["seed"]),
        model_ids=model_ids,
        test_model_ids=tuple(manifest.get("test_model_ids", [])),
        params=manifest.get("params", {}),
    )
