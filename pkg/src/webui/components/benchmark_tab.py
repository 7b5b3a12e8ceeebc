import logging
from typing import Any, Dict, Generator

import gradio as gr
from gradio.components import Component

from src.evalkit.report import evaluate, markdown_table, report_frame, report_title
from src.graph.loaders import load_graph_catalog
from src.metafeat.store import load_feature_matrix
from src.perfdata.matrix import load_performance_matrix
from src.selectors.registry import algorithm_ids, display_name
from src.testbeds.protocols import GraphRecord, build_testbed
from src.utils.config import SMALL_TO_LARGE_EPSILON, TESTBEDS, default_jobs
from src.webui.webui_manager import WebuiManager

logger = logging.getLogger(__name__)

# cross_task needs two model catalogs; it stays on the command line
UI_TESTBEDS = [t for t in TESTBEDS if t != "cross_task"]


def run_benchmark(webui_manager: WebuiManager,
                  components: Dict[Component, Any]) -> Generator[Dict[Component, Any], None, None]:
    def get_setting(key: str, default: Any = None):
        return webui_manager.setting(components, f"benchmark.{key}", default)

    run_button_comp = webui_manager.get_component_by_id("benchmark.run_button")
    report_comp = webui_manager.get_component_by_id("benchmark.report")
    status_comp = webui_manager.get_component_by_id("benchmark.status")

    yield {
        run_button_comp: gr.update(value="⏳ Running...", interactive=False),
        status_comp: gr.update(value="Building the testbed..."),
    }

    try:
        graphs_path = get_setting("graphs_path")
        perf_path = get_setting("perf_path")
        features_path = get_setting("features_path")
        if not (graphs_path and perf_path and features_path):
            raise ValueError("graph catalog, performance CSV and meta-feature CSV are all required")
        algorithms = list(get_setting("algorithms", []))
        if not algorithms:
            raise ValueError("pick at least one algorithm")
        testbed = get_setting("testbed", "fully_observed")
        seed = int(get_setting("seed", 0))

        records = [GraphRecord.from_entry(e) for e in load_graph_catalog(graphs_path)]
        P = load_performance_matrix(perf_path)
        features = load_feature_matrix(features_path)
        split = build_testbed(testbed, records, P, seed, sparsity=float(get_setting("sparsity", 0.5)),
                              epsilon=int(get_setting("epsilon", SMALL_TO_LARGE_EPSILON)))
        logger.info(f"Benchmark {testbed}: {len(split.folds)} folds, {len(algorithms)} algorithms")

        reports, timings = evaluate(split, features, P, algorithms, seed=seed,
                                    jobs=int(get_setting("jobs", 1)))
        table = markdown_table(report_frame(reports), title=report_title(testbed, features.schema))
        fit_seconds = sum(t.fit_seconds for t in timings)
        yield {
            report_comp: gr.update(value=table),
            status_comp: gr.update(value=f"✅ {testbed}: {len(split.folds)} folds, "
                                         f"{fit_seconds:.1f}s spent fitting"),
            run_button_comp: gr.update(value="▶️ Run Benchmark", interactive=True),
        }
    except Exception as e:
        logger.error(f"Benchmark failed: {e}", exc_info=True)
        gr.Warning(f"Benchmark failed: {e}")
        yield {
            status_comp: gr.update(value=f"❌ Benchmark failed: {e}"),
            run_button_comp: gr.update(value="▶️ Run Benchmark", interactive=True),
        }


def create_benchmark_tab(webui_manager: WebuiManager):
    """
    Tab that evaluates selectors on a testbed of the corpus.
    """
    components = {}

    with gr.Column():
        gr.Markdown(
            """
            # 📈 Benchmark
            ### Compare model selectors on held-out graphs
            """,
            elem_classes=["tab-header-text"],
        )

        with gr.Row():
            with gr.Column(scale=2):
                with gr.Group():
                    gr.Markdown("📁 **Corpus**")
                    components["graphs_path"] = gr.Textbox(label="Graph catalog CSV", placeholder="./data/graphs.csv")
                    components["perf_path"] = gr.Textbox(label="Performance CSV", placeholder="./data/perf.csv")
                    components["features_path"] = gr.Textbox(
                        label="Meta-feature CSV", placeholder="./tmp/glselect/features_regular.csv")

                with gr.Group():
                    gr.Markdown("🧪 **Testbed**")
                    components["testbed"] = gr.Dropdown(label="Testbed", choices=UI_TESTBEDS, value="fully_observed")
                    components["sparsity"] = gr.Slider(
                        label="Observed fraction (sparse)", minimum=0.1, maximum=0.9, value=0.5, step=0.2)
                    components["epsilon"] = gr.Number(
                        label="Node threshold (small_to_large)", value=SMALL_TO_LARGE_EPSILON, precision=0)
                    components["algorithms"] = gr.CheckboxGroup(
                        label="Algorithms",
                        choices=[(display_name(a), a) for a in algorithm_ids()],
                        value=["gb_avgperf", "isac", "metagl_lite"],
                    )
                    with gr.Row():
                        components["seed"] = gr.Number(label="Seed", value=0, precision=0, minimum=0)
                        components["jobs"] = gr.Number(label="Jobs", value=default_jobs(), precision=0, minimum=1)

                components["run_button"] = gr.Button("▶️ Run Benchmark", variant="primary")

            with gr.Column(scale=3):
                with gr.Group():
                    gr.Markdown("📊 **Report**")
                    components["status"] = gr.Textbox(label="Status", lines=2, interactive=False)
                    components["report"] = gr.Markdown()

    webui_manager.add_components("benchmark", components)

    def run_wrapper(*args) -> Generator[Dict[Component, Any], None, None]:
        all_components = webui_manager.get_components()
        components_dict = {comp: args[i] for i, comp in enumerate(all_components) if i < len(args)}
        yield from run_benchmark(webui_manager, components_dict)

    components["run_button"].click(
        fn=run_wrapper,
        inputs=webui_manager.get_components(),
        outputs=webui_manager.get_components(),
    )
