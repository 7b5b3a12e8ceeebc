import os

ALGORITHM_DISPLAY_NAMES = {
    "randsel": "RandSel",
    "gb_avgperf": "GB-Perf",
    "gb_avgrank": "GB-Rank",
    "isac": "ISAC",
    "argosmart": "AS",
    "s2": "S2",
    "alors": "ALORS",
    "ncf": "NCF",
    "metaod": "MetaOD-style",
    "metagl_lite": "MetaGL-lite",
}

SCHEMA_DIMENSIONS = {
    "regular": 318,
    "graphlets": 756,
    "compact": 58,
    "reg_plus_graphlets": 1074,
}

SCHEMA_DISPLAY_NAMES = {
    "regular": "M_regular",
    "graphlets": "M_graphlets",
    "compact": "M_compact",
    "reg_plus_graphlets": "M_reg+graphlets",
}

TESTBEDS = ["fully_observed", "sparse", "out_of_domain", "small_to_large", "cross_task"]

TASKS = ["link_prediction", "node_classification"]

# benchmark grid of the sparse testbed
SPARSITY_GRID = [0.1, 0.3, 0.5, 0.7, 0.9]

SMALL_TO_LARGE_EPSILON = 10000

N_FOLDS = 5

REPORT_METRICS = ["auc", "mrr", "map", "ndcg1"]

# Defaults per selector; config files and flags override any key.
default_hyperparams = {
    "randsel": {},
    "gb_avgperf": {},
    "gb_avgrank": {},
    "isac": {"k": 5, "max_iter": 100},
    "argosmart": {},
    "s2": {"hidden": [32, 32], "optimizer": "sgd", "lr": 0.01, "momentum": 0.9, "weight_decay": 0.0,
           "epochs": 500, "patience": 50, "tol": 1e-7},
    "alors": {"rank": 32, "nmf_iter": 500, "hidden": [32, 32], "optimizer": "sgd", "lr": 0.01, "momentum": 0.9,
              "weight_decay": 0.0, "epochs": 500, "patience": 50, "tol": 1e-7},
    "ncf": {"latent": 32, "hidden": [32], "optimizer": "adam", "lr": 0.01, "weight_decay": 0.0001,
            "momentum": 0.9, "epochs": 500, "patience": 50, "tol": 1e-7},
    "metaod": {"rank": 32, "n_estimators": 100, "max_depth": 10, "optimizer": "adam", "lr": 0.01,
               "weight_decay": 0.0, "momentum": 0.9, "epochs": 500, "patience": 50, "tol": 1e-7,
               "temperature": 1.0},
    "metagl_lite": {"embedding": 32, "layers": 2, "top_k": 30, "optimizer": "adam", "lr": 0.01,
                    "weight_decay": 0.0, "momentum": 0.9, "epochs": 500, "patience": 50, "tol": 1e-7},
}


def env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    return int(value)


def env_str(name: str, default: str) -> str:
    value = os.getenv(name)
    return value if value else default


def default_jobs() -> int:
    return env_int("GLSELECT_JOBS", 1)


def default_out_dir() -> str:
    return env_str("GLSELECT_OUT", "./tmp/glselect")


def default_log_level() -> str:
    return env_str("GLSELECT_LOG_LEVEL", "INFO")


def default_schema() -> str:
    return env_str("GLSELECT_SCHEMA", "regular")


def hyperparams_for(algorithm: str, overrides: dict = None) -> dict:
    """Defaults for `algorithm` merged with overrides; GLSELECT_EPOCHS caps the epoch budget."""
    params = dict(default_hyperparams.get(algorithm, {}))
    if "epochs" in params:
        params["epochs"] = env_int("GLSELECT_EPOCHS", params["epochs"])
    params.update(overrides or {})
    return params


def default_webui_model_cache() -> int:
    """How many fitted selectors the web UI keeps before evicting the least recently used."""
    return env_int("GLSELECT_WEBUI_MODELS", 8)
