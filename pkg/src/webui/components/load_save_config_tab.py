import gradio as gr

from src.webui.webui_manager import WebuiManager


def create_load_save_config_tab(webui_manager: WebuiManager):
    """
    Save the current selection and benchmark inputs as JSON, load them back,
    and drop selector models fitted during this session.
    """
    tab_components = {}

    config_file = gr.File(label="UI settings (.json)", file_types=[".json"], interactive=True)
    with gr.Row():
        load_config_button = gr.Button("Load Settings", variant="primary")
        save_config_button = gr.Button("Save Settings", variant="primary")
        clear_models_button = gr.Button("Clear Fitted Models", variant="secondary")

    config_status = gr.Textbox(label="Status", lines=2, interactive=False)

    tab_components.update(dict(
        load_config_button=load_config_button,
        save_config_button=save_config_button,
        clear_models_button=clear_models_button,
        config_status=config_status,
        config_file=config_file,
    ))
    webui_manager.add_components("load_save_config", tab_components)

    def save_wrapper(*args) -> str:
        path = webui_manager.save_config(dict(zip(webui_manager.get_components(), args)))
        return f"Saved settings to {path}"

    def clear_wrapper() -> str:
        count = webui_manager.clear_models()
        return f"Dropped {count} cached selector models"

    save_config_button.click(fn=save_wrapper, inputs=webui_manager.get_components(), outputs=[config_status])
    load_config_button.click(fn=webui_manager.load_config, inputs=[config_file],
                             outputs=webui_manager.get_components())
    clear_models_button.click(fn=clear_wrapper, inputs=[], outputs=[config_status])
