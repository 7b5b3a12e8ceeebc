import gradio as gr

from src.selectors.registry import algorithm_ids
from src.utils.config import SCHEMA_DIMENSIONS
from src.webui.components.benchmark_tab import create_benchmark_tab
from src.webui.components.load_save_config_tab import create_load_save_config_tab
from src.webui.components.select_tab import create_select_tab
from src.webui.webui_manager import WebuiManager

theme_map = {
    "Ocean": gr.themes.Ocean(),
    "Soft": gr.themes.Soft(),
    "Default": gr.themes.Default(),
    "Monochrome": gr.themes.Monochrome(),
    "Base": gr.themes.Base(),
}

CSS = """
.gradio-container {
    width: 80vw !important;
    max-width: 80% !important;
    margin-left: auto !important;
    margin-right: auto !important;
}
.header-text, .tab-header-text {
    text-align: center;
}
.header-text {
    margin-bottom: 16px;
}
"""


def create_ui(theme_name: str = "Ocean", settings_dir: str = "./tmp/webui_settings") -> gr.Blocks:
    ui_manager = WebuiManager(settings_save_dir=settings_dir)

    with gr.Blocks(title="glselect", theme=theme_map[theme_name], css=CSS) as demo:
        gr.Markdown(
            f"""
            # 🧭 glselect
            ### Pick a graph-learning model for a new graph from meta-graph features alone
            {len(algorithm_ids())} selectors · meta-feature schemas: {", ".join(SCHEMA_DIMENSIONS)}
            """,
            elem_classes=["header-text"],
        )

        with gr.Tabs():
            with gr.TabItem("🔍 Select Model"):
                create_select_tab(ui_manager)

            with gr.TabItem("📈 Benchmark"):
                create_benchmark_tab(ui_manager)

            with gr.TabItem("📁 Load & Save Config"):
                create_load_save_config_tab(ui_manager)

    return demo
