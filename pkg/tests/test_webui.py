import json
import os

import gradio as gr
import pytest

from src.cli.main import main
from src.webui.components.load_save_config_tab import create_load_save_config_tab
from src.webui.components.select_tab import SOURCE_CORPUS, create_select_tab, run_selection
from src.webui.webui_manager import WebuiManager


@pytest.fixture
def corpus_files(toy_corpus, tmp_path):
    out = str(tmp_path / "out")
    assert main(["features", "--graphs", toy_corpus["catalog"], "--schema", "compact", "--seed", "0",
                 "--out", out]) == 0
    return {**toy_corpus, "features": os.path.join(out, "features_compact.csv")}


def test_fitted_models_are_cached(corpus_files, tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"))
    first = manager.get_fitted_model("gb_avgperf", corpus_files["features"], corpus_files["perf"], seed=0)
    assert manager.get_fitted_model("gb_avgperf", corpus_files["features"], corpus_files["perf"], seed=0) is first
    other = manager.get_fitted_model("gb_avgperf", corpus_files["features"], corpus_files["perf"], seed=1)
    assert other is not first
    manager.clear_models()
    assert not manager.model_cache


def test_run_selection_ranks_every_model(corpus_files, tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"))
    with gr.Blocks():
        create_select_tab(manager)
    values = {
        "query_file": os.path.join(corpus_files["graphs_dir"], "g2.edges"),
        "source": SOURCE_CORPUS,
        "features_path": corpus_files["features"],
        "perf_path": corpus_files["perf"],
        "algorithm": "argosmart",
        "seed": 0,
        "neighbor_cap": 0,
        "directed": False,
    }
    components = {manager.get_component_by_id(f"select.{k}"): v for k, v in values.items()}
    updates = list(run_selection(manager, components))
    final = updates[-1]
    table = final[manager.get_component_by_id("select.ranking")]["value"]
    assert len(table) == 4
    assert "picks" in final[manager.get_component_by_id("select.status")]["value"]


def test_save_config_skips_buttons(tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"))
    with gr.Blocks():
        create_select_tab(manager)
    seed = manager.get_component_by_id("select.seed")
    button = manager.get_component_by_id("select.run_button")
    path = manager.save_config({seed: 7, button: "go"})
    with open(path, encoding="utf-8") as fr:
        assert json.load(fr) == {"select.seed": 7}


def test_model_cache_evicts_least_recently_used(corpus_files, tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"), max_models=2)

    def fit(seed):
        return manager.get_fitted_model("gb_avgperf", corpus_files["features"], corpus_files["perf"], seed=seed)

    first, second = fit(0), fit(1)
    assert fit(0) is first
    fit(2)
    assert len(manager.model_cache) == 2
    assert fit(0) is first
    assert fit(1) is not second


def test_duplicate_component_id_is_rejected(tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"))
    with gr.Blocks():
        create_select_tab(manager)
        with pytest.raises(ValueError, match="select.seed"):
            manager.add_components("select", {"seed": gr.Number()})


def test_load_config_applies_known_inputs(tmp_path):
    manager = WebuiManager(settings_save_dir=str(tmp_path / "settings"))
    with gr.Blocks():
        create_select_tab(manager)
        create_load_save_config_tab(manager)
    path = tmp_path / "ui.json"
    path.write_text(json.dumps({"select.seed": 5, "select.run_button": "go", "other.widget": 1}), encoding="utf-8")
    updates = next(manager.load_config(str(path)))
    assert updates[manager.get_component_by_id("select.seed")]["value"] == 5
    assert manager.get_component_by_id("select.run_button") not in updates
    status = updates[manager.get_component_by_id("load_save_config.config_status")]["value"]
    assert "Loaded 1 settings" in status and "2 ignored" in status
