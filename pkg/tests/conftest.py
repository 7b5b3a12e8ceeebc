import logging

import pytest

from src.graph.graph import Graph
from tests.synthetic import complete_graph, cycle_graph, path_graph, star_graph, write_toy_corpus


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4, "k4")


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4, "c4")


@pytest.fixture
def p4() -> Graph:
    return path_graph(4, "p4")


@pytest.fixture
def star4() -> Graph:
    """Centre 0 with four leaves."""
    return star_graph(4, "star4")


@pytest.fixture
def tailed_triangle() -> Graph:
    """Triangle 0-1-2 with a pendant node 3 hanging off node 2."""
    return Graph.from_edges("tailed", 4, [(0, 1), (1, 2), (0, 2), (2, 3)])


@pytest.fixture
def toy_corpus(tmp_path):
    return write_toy_corpus(str(tmp_path / "corpus"))


@pytest.fixture(autouse=True)
def _drop_cli_log_handler():
    """Entry points install a stderr handler bound to the captured stream; remove it after each test."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_glselect", False):
            root.removeHandler(handler)
