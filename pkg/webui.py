from dotenv import load_dotenv
load_dotenv(override=True)

import argparse

from src.utils.config import default_log_level
from src.utils.logging_setup import setup_logging
from src.webui.interface import theme_map, create_ui


def main():
    parser = argparse.ArgumentParser(description="Gradio WebUI for graph-learning model selection")
    parser.add_argument("--ip", type=str, default="127.0.0.1", help="IP address to bind to")
    parser.add_argument("--port", type=int, default=7788, help="Port to listen on")
    parser.add_argument("--theme", type=str, default="Ocean", choices=theme_map.keys(), help="Theme to use for the UI")
    parser.add_argument("--settings-dir", type=str, default="./tmp/webui_settings", help="Where UI settings are saved")
    parser.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR")
    args = parser.parse_args()

    setup_logging(args.log_level or default_log_level())
    demo = create_ui(theme_name=args.theme, settings_dir=args.settings_dir)
    demo.queue().launch(server_name=args.ip, server_port=args.port)


if __name__ == '__main__':
    main()
