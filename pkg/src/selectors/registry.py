from typing import Dict, List, Type

from src.selectors.alors import ALORSSelector
from src.selectors.argosmart import ArgoSmartSelector
from src.selectors.base import Selector
from src.selectors.baselines import GlobalAvgPerfSelector, GlobalAvgRankSelector, RandomSelector
from src.selectors.isac import ISACSelector
from src.selectors.metagl import MetaGLLiteSelector
from src.selectors.metaod import MetaODSelector
from src.selectors.ncf import NCFSelector
from src.selectors.s2 import S2Selector
from src.utils.config import ALGORITHM_DISPLAY_NAMES
from src.utils.errors import ConfigError

SELECTORS: Dict[str, Type[Selector]] = {
    cls.algorithm: cls
    for cls in (
        RandomSelector,
        GlobalAvgPerfSelector,
        GlobalAvgRankSelector,
        ISACSelector,
        ArgoSmartSelector,
        S2Selector,
        ALORSSelector,
        NCFSelector,
        MetaODSelector,
        MetaGLLiteSelector,
    )
}


def algorithm_ids() -> List[str]:
    return list(SELECTORS)


def get_selector(algorithm: str) -> Selector:
    try:
        return SELECTORS[algorithm]()
    except KeyError:
        raise ConfigError(f"unknown algorithm {algorithm!r}; choose from {', '.join(SELECTORS)}") from None


def display_name(algorithm: str) -> str:
    return ALGORITHM_DISPLAY_NAMES.get(algorithm, algorithm)


def parse_algorithms(names: str) -> List[str]:
    """Comma-separated ids, or `all`; unknown ids raise ConfigError."""
    if names.strip() == "all":
        return algorithm_ids()
    ids = [a.strip() for a in names.split(",") if a.strip()]
    if not ids:
        raise ConfigError("no algorithms given")
    for a in ids:
        get_selector(a)
    return ids
