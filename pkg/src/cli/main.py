import argparse
import logging
from typing import List, Optional

from src.cli.commands import COMMANDS
from src.cli.run_config import build_run_config
from src.utils.config import SCHEMA_DIMENSIONS, TASKS, TESTBEDS, default_log_level
from src.utils.errors import ConfigError, DataError, GlselectError
from src.utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises ConfigError instead of exiting with status 2."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, help="TOML file with option values and [hyperparams.<id>] tables")
    p.add_argument("--seed", type=int, help="Random seed (mandatory for anything random)")
    p.add_argument("--out", type=str, help="Output directory (default: $GLSELECT_OUT or ./tmp/glselect)")
    p.add_argument("--jobs", type=int, help="Parallel workers (default: $GLSELECT_JOBS or 1)")
    p.add_argument("--force", action="store_true", help="Overwrite existing outputs")
    p.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING or ERROR")


def _add_corpus(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graphs", type=str, help="Graph catalog CSV")
    p.add_argument("--perf", type=str, help="Performance matrix CSV")
    p.add_argument("--features", type=str, help="Meta-feature CSV (default: <out>/features_<schema>.csv)")
    p.add_argument("--schema", type=str, help=f"One or more of {', '.join(SCHEMA_DIMENSIONS)}, comma-separated")
    p.add_argument("--models", type=str, help="Model catalog CSV")


def _add_testbed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--testbed", type=str, choices=TESTBEDS)
    p.add_argument("--sparsity", type=float, help="Observed fraction per training row (sparse testbed)")
    p.add_argument("--epsilon", type=int, help="Node-count threshold (small_to_large testbed)")
    p.add_argument("--target-perf", dest="target_perf", type=str, help="Target-task performance CSV (cross_task)")
    p.add_argument("--target-models", dest="target_models", type=str, help="Target-task model catalog (cross_task)")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog="glselect", description="Instantaneous graph-learning model selection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="Extract meta-graph features for a graph catalog")
    _add_common(p)
    _add_corpus(p)
    p.add_argument("--neighbor-cap", dest="neighbor_cap", type=int, help="Sample neighbour sets above this size")

    p = sub.add_parser("splits", help="Generate per-graph train/val/test splits")
    _add_common(p)
    p.add_argument("--graphs", type=str, help="Graph catalog CSV")
    p.add_argument("--task", type=str, choices=TASKS)

    p = sub.add_parser("testbed", help="Build and save a testbed split")
    _add_common(p)
    _add_corpus(p)
    _add_testbed(p)

    p = sub.add_parser("run", help="Evaluate selectors on a testbed")
    _add_common(p)
    _add_corpus(p)
    _add_testbed(p)
    p.add_argument("--algorithms", type=str, help="Comma-separated algorithm ids, or `all`")
    p.add_argument("--split", type=str, help="Reuse a saved testbed split")
    p.add_argument("--metrics", type=str, help="Comma-separated report metrics (default: auc,mrr,map,ndcg1)")

    p = sub.add_parser("fit", help="Fit one selector on the corpus and save its bundle")
    _add_common(p)
    _add_corpus(p)
    p.add_argument("--algorithms", type=str, help="Algorithm id")
    p.add_argument("--bundle", type=str, help="Bundle directory (default: <out>/bundles/<algorithm>)")

    p = sub.add_parser("select", help="Rank candidate models for a new graph")
    _add_common(p)
    _add_corpus(p)
    p.add_argument("--algorithms", type=str, help="Algorithm id (when fitting from a corpus)")
    p.add_argument("--bundle", type=str, help="Fitted selector bundle directory")
    p.add_argument("--query", type=str, help="Edge list of the query graph")
    p.add_argument("--directed", action="store_true", help="Treat the query edge list as directed")
    p.add_argument("--neighbor-cap", dest="neighbor_cap", type=int)

    p = sub.add_parser("report", help="Render a report CSV as Markdown")
    _add_common(p)
    p.add_argument("--report", type=str, help="report.csv written by `run`")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as e:
        setup_logging(default_log_level())
        logger.error(str(e))
        return EXIT_USAGE
    setup_logging(args.log_level or default_log_level())

    try:
        cfg = build_run_config(args)
        cfg.check_files()
        return COMMANDS[args.command](cfg)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except DataError as e:
        logger.error(str(e))
        return EXIT_DATA
    except GlselectError as e:
        logger.error(str(e))
        return EXIT_RUNTIME
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_RUNTIME
