import argparse
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from src.utils import config
from src.utils.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

PATH_FIELDS = ("graphs", "perf", "features", "target_perf", "models", "target_models", "split", "bundle",
               "query", "report")


@dataclass
class RunConfig:
    """Everything one CLI invocation needs; flags override the TOML file, which overrides the environment."""

    seed: Optional[int] = None
    graphs: Optional[str] = None
    perf: Optional[str] = None
    features: Optional[str] = None
    target_perf: Optional[str] = None
    models: Optional[str] = None
    target_models: Optional[str] = None
    split: Optional[str] = None
    bundle: Optional[str] = None
    query: Optional[str] = None
    report: Optional[str] = None
    schemas: List[str] = field(default_factory=lambda: [config.default_schema()])
    testbed: Optional[str] = None
    sparsity: Optional[float] = None
    epsilon: int = config.SMALL_TO_LARGE_EPSILON
    algorithms: List[str] = field(default_factory=list)
    metrics: List[str] = field(default_factory=lambda: list(config.REPORT_METRICS))
    task: str = "link_prediction"
    directed: bool = False
    neighbor_cap: Optional[int] = None
    jobs: int = field(default_factory=config.default_jobs)
    out: str = field(default_factory=config.default_out_dir)
    force: bool = False
    hyperparams: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @property
    def schema(self) -> str:
        return self.schemas[0]

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) in (None, [], "")]
        if missing:
            raise ConfigError("missing required option(s): " + ", ".join(f"--{n.replace('_', '-')}" for n in missing))

    def require_seed(self) -> int:
        if self.seed is None:
            raise ConfigError("--seed is required (there is no clock-based default)")
        if self.seed < 0:
            raise ConfigError(f"--seed must be a non-negative integer, got {self.seed}")
        return self.seed

    def check_files(self) -> None:
        for name in PATH_FIELDS:
            path = getattr(self, name)
            if path and name not in ("report",) and not os.path.exists(path):
                raise DataError(f"--{name.replace('_', '-')} does not exist", path=path)

    def config_for(self, algorithm: str) -> Dict[str, Any]:
        return dict(self.hyperparams.get(algorithm, {}))


def _as_list(value: Any) -> List[str]:
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v) for v in value]


def load_config_file(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigError(f"config file {path} not found")
    with open(path, "rb") as fr:
        try:
            return tomllib.load(fr)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"invalid TOML in {path}: {e}") from None


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None and flag is not False:
            values[f.name] = flag
    if getattr(args, "schema", None) is not None:
        values["schemas"] = args.schema
    elif "schema" in values:
        values["schemas"] = values.pop("schema")

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known - {"schema", "config", "command", "log_level"})
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {k: v for k, v in values.items() if k in known}
    if "schemas" in kwargs:
        kwargs["schemas"] = _as_list(kwargs["schemas"])
        for schema in kwargs["schemas"]:
            if schema not in config.SCHEMA_DIMENSIONS:
                raise ConfigError(f"unknown schema {schema!r}; choose from {', '.join(config.SCHEMA_DIMENSIONS)}")
    if "algorithms" in kwargs:
        kwargs["algorithms"] = _as_list(kwargs["algorithms"])
    if "metrics" in kwargs:
        kwargs["metrics"] = _as_list(kwargs["metrics"])
        bad = [m for m in kwargs["metrics"] if m not in config.REPORT_METRICS]
        if bad or not kwargs["metrics"]:
            raise ConfigError(f"unknown metric(s) {bad}; choose from {', '.join(config.REPORT_METRICS)}")
    if "hyperparams" in kwargs and not isinstance(kwargs["hyperparams"], dict):
        raise ConfigError("[hyperparams] must be a table of per-algorithm tables")
    try:
        cfg = RunConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(str(e)) from None
    if cfg.testbed is not None and cfg.testbed not in config.TESTBEDS:
        raise ConfigError(f"unknown testbed {cfg.testbed!r}; choose from {', '.join(config.TESTBEDS)}")
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return cfg
