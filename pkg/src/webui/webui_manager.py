import json
import logging
import os
from collections import OrderedDict
from datetime import datetime
from typing import Any, Dict, Generator, List, Optional, Tuple

import gradio as gr
from gradio.components import Component

from src.metafeat.store import load_feature_matrix
from src.perfdata.matrix import load_performance_matrix
from src.selectors.base import SelectorModel, TrainCorpus
from src.selectors.bundle import load_bundle
from src.selectors.registry import get_selector
from src.utils.config import default_webui_model_cache

logger = logging.getLogger(__name__)

# (source, features or bundle path, perf path, seed, hyperparameters json)
ModelKey = Tuple[str, str, str, int, str]

# outputs, uploads and buttons are never written to a settings file
TRANSIENT_KINDS = (gr.Button, gr.File, gr.Dataframe, gr.Markdown)
UNSET = (None, "", [])


class WebuiManager:
    """
    Shared state of the glselect tabs: components registered under "tab.name"
    ids, and a least-recently-used cache of fitted selectors so repeated
    queries against one corpus skip the fit.
    """

    def __init__(self, settings_save_dir: str = "./tmp/webui_settings", max_models: Optional[int] = None):
        self.components: Dict[str, Component] = {}
        self.component_ids: Dict[Component, str] = {}

        self.settings_save_dir = settings_save_dir
        os.makedirs(self.settings_save_dir, exist_ok=True)

        self.max_models = max(1, max_models if max_models is not None else default_webui_model_cache())
        self.model_cache: "OrderedDict[ModelKey, SelectorModel]" = OrderedDict()

    # fitted selectors

    def _cached(self, key: ModelKey) -> Optional[SelectorModel]:
        model = self.model_cache.get(key)
        if model is not None:
            self.model_cache.move_to_end(key)
        return model

    def _remember(self, key: ModelKey, model: SelectorModel) -> SelectorModel:
        self.model_cache[key] = model
        while len(self.model_cache) > self.max_models:
            evicted, _ = self.model_cache.popitem(last=False)
            logger.info(f"Evicted cached {evicted[0]} model (seed={evicted[3]}), cache holds {self.max_models}")
        return model

    def get_fitted_model(self, algorithm: str, features_path: str, perf_path: str, seed: int,
                         hyperparams: Optional[dict] = None) -> SelectorModel:
        """Fit `algorithm` on the corpus, or reuse the model fitted for the same inputs."""
        key = (algorithm, os.path.abspath(features_path), os.path.abspath(perf_path), int(seed),
               json.dumps(hyperparams or {}, sort_keys=True))
        model = self._cached(key)
        if model is None:
            corpus = TrainCorpus.from_features(load_feature_matrix(features_path), load_performance_matrix(perf_path))
            model = self._remember(key, get_selector(algorithm).fit(corpus, hyperparams, int(seed)))
            logger.info(f"Fitted {algorithm} on {corpus.n} graphs x {corpus.m} models (seed={seed})")
        return model

    def get_bundle(self, directory: str) -> SelectorModel:
        key = ("bundle", os.path.abspath(directory), "", 0, "")
        return self._cached(key) or self._remember(key, load_bundle(directory))

    def clear_models(self) -> int:
        count = len(self.model_cache)
        self.model_cache.clear()
        return count

    # component registry

    def add_components(self, tab_name: str, components_dict: Dict[str, Component]) -> None:
        for comp_name, component in components_dict.items():
            comp_id = f"{tab_name}.{comp_name}"
            if comp_id in self.components:
                raise ValueError(f"component {comp_id!r} is already registered")
            self.components[comp_id] = component
            self.component_ids[component] = comp_id

    def get_components(self) -> List[Component]:
        return list(self.components.values())

    def get_component_by_id(self, comp_id: str) -> Component:
        try:
            return self.components[comp_id]
        except KeyError:
            tabs = sorted({registered.split(".", 1)[0] for registered in self.components})
            raise KeyError(f"no component {comp_id!r}; registered tabs: {', '.join(tabs) or 'none'}") from None

    def setting(self, values: Dict[Component, Any], comp_id: str, default: Any = None) -> Any:
        """Value a handler received for `comp_id`, or `default` when it is missing or left empty."""
        comp = self.components.get(comp_id)
        value = values.get(comp, default) if comp is not None else default
        return default if value in UNSET else value

    def persistable_settings(self, values: Dict[Component, Any]) -> Dict[str, Any]:
        """Interactive inputs keyed by component id; outputs, uploads and buttons are left out."""
        settings = {}
        for comp, value in values.items():
            if isinstance(comp, TRANSIENT_KINDS) or str(getattr(comp, "interactive", True)).lower() == "false":
                continue
            settings[self.component_ids[comp]] = value
        return dict(sorted(settings.items()))

    # settings files

    def save_config(self, values: Dict[Component, Any]) -> str:
        settings = self.persistable_settings(values)
        path = os.path.join(self.settings_save_dir, f"{datetime.now().strftime('%Y%m%d-%H%M%S')}.json")
        with open(path, "w", encoding="utf-8") as fw:
            json.dump(settings, fw, indent=4)
        logger.info(f"Saved {len(settings)} UI settings to {path}")
        return path

    def load_config(self, config_path: Optional[str]) -> Generator[Dict[Component, Any], None, None]:
        """Push a saved settings file into the registered inputs; unknown or output ids are skipped."""
        status = self.components["load_save_config.config_status"]
        if not config_path or not os.path.exists(config_path):
            gr.Warning("Choose a settings file to load")
            yield {status: gr.update(value="No settings file selected")}
            return
        with open(config_path, "r", encoding="utf-8") as fr:
            settings = json.load(fr)

        updates: Dict[Component, Any] = {}
        skipped = []
        for comp_id, value in settings.items():
            comp = self.components.get(comp_id)
            if comp is None or isinstance(comp, TRANSIENT_KINDS):
                skipped.append(comp_id)
                continue
            updates[comp] = gr.update(value=value)
        if skipped:
            logger.warning(f"Settings file {config_path}: ignored ids {', '.join(skipped)}")
        message = f"Loaded {len(updates)} settings from {config_path}"
        if skipped:
            message += f" ({len(skipped)} ignored)"
        updates[status] = gr.update(value=message)
        yield updates
