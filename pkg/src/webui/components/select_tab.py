import logging
from typing import Any, Dict, Generator

import gradio as gr
from gradio.components import Component

from src.cli.commands import select_for_graph
from src.selectors.registry import algorithm_ids, display_name
from src.webui.webui_manager import WebuiManager

logger = logging.getLogger(__name__)

SOURCE_BUNDLE = "Fitted bundle"
SOURCE_CORPUS = "Fit on corpus"


def run_selection(webui_manager: WebuiManager,
                  components: Dict[Component, Any]) -> Generator[Dict[Component, Any], None, None]:
    """Rank every candidate model for the uploaded graph."""

    def get_setting(key: str, default: Any = None):
        return webui_manager.setting(components, f"select.{key}", default)

    run_button_comp = webui_manager.get_component_by_id("select.run_button")
    ranking_comp = webui_manager.get_component_by_id("select.ranking")
    status_comp = webui_manager.get_component_by_id("select.status")

    yield {
        run_button_comp: gr.update(value="⏳ Selecting...", interactive=False),
        status_comp: gr.update(value="Extracting meta-graph features..."),
    }

    try:
        query_path = get_setting("query_file")
        if not query_path:
            raise ValueError("upload an edge list first")
        if get_setting("source", SOURCE_BUNDLE) == SOURCE_BUNDLE:
            bundle_dir = get_setting("bundle_dir")
            if not bundle_dir:
                raise ValueError("bundle directory is empty")
            model = webui_manager.get_bundle(bundle_dir)
        else:
            features_path = get_setting("features_path")
            perf_path = get_setting("perf_path")
            if not features_path or not perf_path:
                raise ValueError("fitting needs both a meta-feature CSV and a performance CSV")
            model = webui_manager.get_fitted_model(get_setting("algorithm", "metagl_lite"), features_path,
                                                   perf_path, int(get_setting("seed", 0)))

        table = select_for_graph(model, query_path, directed=bool(get_setting("directed", False)),
                                 neighbor_cap=int(get_setting("neighbor_cap", 0)) or None)
        best = table.iloc[0]
        yield {
            ranking_comp: gr.update(value=table),
            status_comp: gr.update(value=f"✅ {display_name(model.algorithm)} picks {best['model_id']} "
                                         f"(score {best['score']:.4f}) out of {len(table)} models"),
            run_button_comp: gr.update(value="🔍 Select Model", interactive=True),
        }
    except Exception as e:
        logger.error(f"Model selection failed: {e}", exc_info=True)
        gr.Warning(f"Model selection failed: {e}")
        yield {
            status_comp: gr.update(value=f"❌ Selection failed: {e}"),
            run_button_comp: gr.update(value="🔍 Select Model", interactive=True),
        }


def create_select_tab(webui_manager: WebuiManager):
    """Tab that ranks candidate models for one unseen graph."""
    components = {}

    with gr.Column():
        gr.Markdown(
            """
            # 🔍 Select Model
            ### Rank candidate graph-learning models for a new graph without training any of them
            """,
            elem_classes=["tab-header-text"],
        )

        with gr.Row():
            with gr.Column(scale=2):
                with gr.Group():
                    gr.Markdown("📄 **Query graph**")
                    components["query_file"] = gr.File(
                        label="Edge list (one `u v` pair per line)",
                        file_types=[".txt", ".edges", ".csv", ".tsv"],
                        type="filepath",
                    )
                    components["directed"] = gr.Checkbox(label="Directed", value=False)
                    components["neighbor_cap"] = gr.Number(
                        label="Neighbour cap (0 = exact)", value=0, precision=0, minimum=0)

                with gr.Group():
                    gr.Markdown("🧠 **Selector**")
                    components["source"] = gr.Radio(
                        label="Source", choices=[SOURCE_BUNDLE, SOURCE_CORPUS], value=SOURCE_BUNDLE)
                    components["bundle_dir"] = gr.Textbox(
                        label="Bundle directory", placeholder="./tmp/glselect/bundles/metagl_lite")
                    components["features_path"] = gr.Textbox(
                        label="Meta-feature CSV", placeholder="./tmp/glselect/features_regular.csv")
                    components["perf_path"] = gr.Textbox(label="Performance CSV", placeholder="./data/perf.csv")
                    components["algorithm"] = gr.Dropdown(
                        label="Algorithm",
                        choices=[(display_name(a), a) for a in algorithm_ids()],
                        value="metagl_lite",
                    )
                    components["seed"] = gr.Number(label="Seed", value=0, precision=0, minimum=0)

                components["run_button"] = gr.Button("🔍 Select Model", variant="primary")

            with gr.Column(scale=3):
                with gr.Group():
                    gr.Markdown("📊 **Ranking**")
                    components["status"] = gr.Textbox(label="Status", lines=2, interactive=False)
                    components["ranking"] = gr.Dataframe(
                        headers=["rank", "model_id", "score", "top1"],
                        interactive=False,
                        wrap=True,
                    )

        with gr.Accordion("📖 Usage", open=False):
            gr.Markdown("""
            - **Fitted bundle**: point at a directory written by `glselect.py fit`. Nothing is retrained.
            - **Fit on corpus**: fits the chosen algorithm on the meta-feature and performance CSVs.
              The fitted model is cached per (algorithm, files, seed) until the UI restarts.
            - Scores are only comparable within one ranking. Models never observed in training score `-inf`.
            """)

    webui_manager.add_components("select", components)

    def run_wrapper(*args) -> Generator[Dict[Component, Any], None, None]:
        all_components = webui_manager.get_components()
        components_dict = {comp: args[i] for i, comp in enumerate(all_components) if i < len(args)}
        yield from run_selection(webui_manager, components_dict)

    components["run_button"].click(
        fn=run_wrapper,
        inputs=webui_manager.get_components(),
        outputs=webui_manager.get_components(),
    )
