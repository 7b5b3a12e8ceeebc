import numpy as np
import pytest

from src.graph.graph import Graph, symmetrize
from src.graph.loaders import load_catalog_graph, load_edge_list, load_graph_catalog, load_node_labels
from src.graph.splits import (generate_edge_split, generate_node_split, load_edge_split, save_edge_split,
                              split_sizes)
from src.utils.errors import DataError
from tests.synthetic import complete_graph, cycle_graph, random_graph


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_load_triangle(tmp_path):
    g = load_edge_list(_write(tmp_path / "tri.txt", "0 1\n1 2\n2 0\n"))
    assert (g.n, g.m) == (3, 3)
    assert g.id == "tri"


def test_duplicates_and_self_loops_are_dropped(tmp_path):
    g = load_edge_list(_write(tmp_path / "dup.txt", "0 1\n1 0\n0 1\n2 2\n1 2\n"))
    assert g.m == 2
    assert sorted(map(tuple, g.edges.tolist())) == [(0, 1), (1, 2)]


def test_ids_reindexed_in_first_appearance_order(tmp_path):
    g = load_edge_list(_write(tmp_path / "ids.txt", "# header\n10 20 0.5\n20 30\n\n"))
    assert g.n == 3
    assert g.edges.tolist() == [[0, 1], [1, 2]]


def test_malformed_line_reports_line_number(tmp_path):
    path = _write(tmp_path / "bad.txt", "0 1\n1 x\n")
    with pytest.raises(DataError, match="line 2") as exc:
        load_edge_list(path)
    assert exc.value.line == 2


def test_single_token_line_is_rejected(tmp_path):
    with pytest.raises(DataError, match="line 1"):
        load_edge_list(_write(tmp_path / "one.txt", "7\n"))


def test_edge_list_without_edges_is_rejected(tmp_path):
    with pytest.raises(DataError, match="no edges"):
        load_edge_list(_write(tmp_path / "loops.txt", "1 1\n2 2\n"))


def test_undecodable_edge_list_reports_line(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"0 1\n\xff\xfe 2\n")
    with pytest.raises(DataError, match="UTF-8") as exc:
        load_edge_list(str(path))
    assert exc.value.line == 2


def test_unreadable_edge_list(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        load_edge_list(str(tmp_path))


def test_missing_edge_list(tmp_path):
    with pytest.raises(DataError, match="not found"):
        load_edge_list(str(tmp_path / "absent.txt"))


def test_directed_edges_keep_orientation(tmp_path):
    g = load_edge_list(_write(tmp_path / "d.txt", "0 1\n1 0\n1 2\n"), directed=True)
    assert g.m == 3
    assert symmetrize(g).m == 2


def test_symmetrize_is_identity_on_undirected():
    g = complete_graph(4)
    assert symmetrize(g) is g


def test_graph_rejects_invalid_edges():
    with pytest.raises(DataError):
        Graph(id="x", n=3, edges=np.array([[0, 3]]))
    with pytest.raises(DataError):
        Graph(id="x", n=3, edges=np.array([[1, 1]]))
    with pytest.raises(DataError):
        Graph(id="x", n=3, edges=np.array([[2, 1]]))
    with pytest.raises(DataError):
        Graph(id="x", n=3, edges=np.array([[0, 1], [0, 1]]))


def test_relabel_preserves_structure():
    g = random_graph(12, 0.4, seed=3)
    perm = np.random.default_rng(0).permutation(g.n)
    h = g.relabel(perm)
    assert (h.n, h.m) == (g.n, g.m)
    np.testing.assert_array_equal(np.sort(h.degrees), np.sort(g.degrees))
    np.testing.assert_array_equal(h.degrees[perm], g.degrees)


def test_node_labels(tmp_path):
    labels = load_node_labels(_write(tmp_path / "l.txt", "0 1\n1 0\n2 3\n"), 3)
    assert labels.tolist() == [1, 0, 3]
    with pytest.raises(DataError, match="no label"):
        load_node_labels(_write(tmp_path / "short.txt", "0 1\n"), 3)
    with pytest.raises(DataError, match="line 1"):
        load_node_labels(_write(tmp_path / "range.txt", "5 1\n"), 3)


def test_catalog_resolves_relative_paths(tmp_path):
    (tmp_path / "graphs").mkdir()
    _write(tmp_path / "graphs" / "a.txt", "0 1\n1 2\n")
    catalog = _write(tmp_path / "cat.csv",
                     "graph_id,name,domain,n_nodes,n_edges,has_labels,path\n"
                     "a,Graph A,social,3,2,false,graphs/a.txt\n")
    (entry,) = load_graph_catalog(catalog)
    assert entry.domain == "social"
    assert not entry.has_labels
    g = load_catalog_graph(entry)
    assert (g.id, g.n, g.m, g.domain) == ("a", 3, 2, "social")


def test_catalog_duplicate_ids(tmp_path):
    catalog = _write(tmp_path / "cat.csv",
                     "graph_id,name,domain,n_nodes,n_edges,has_labels\n"
                     "a,A,x,3,2,false\na,B,x,3,2,false\n")
    with pytest.raises(DataError, match="duplicate graph_id"):
        load_graph_catalog(catalog)


def test_catalog_missing_columns(tmp_path):
    with pytest.raises(DataError, match="missing columns"):
        load_graph_catalog(_write(tmp_path / "cat.csv", "graph_id,name\na,A\n"))


@pytest.mark.parametrize("total,expected", [(100, (64, 16, 20)), (10, (6, 1, 3)), (5, (3, 0, 2))])
def test_split_sizes(total, expected):
    assert split_sizes(total) == expected


def test_node_split_partitions_nodes():
    g = cycle_graph(100)
    split = generate_node_split(g, seed=7)
    assert (len(split.train), len(split.val), len(split.test)) == (64, 16, 20)
    everything = np.concatenate([split.train, split.val, split.test])
    assert sorted(everything.tolist()) == list(range(100))


def test_node_split_is_deterministic():
    g = cycle_graph(30)
    a, b = generate_node_split(g, 1), generate_node_split(g, 1)
    np.testing.assert_array_equal(a.train, b.train)
    np.testing.assert_array_equal(a.test, b.test)
    assert not np.array_equal(a.train, generate_node_split(g, 2).train)


def test_node_split_needs_five_nodes():
    with pytest.raises(DataError):
        generate_node_split(complete_graph(4), 0)


def _assert_valid_edge_split(g, split):
    edges = set(map(tuple, g.edges.tolist()))
    positives = [tuple(e) for key in ("pos_train", "pos_val", "pos_test") for e in split.roles()[key].tolist()]
    negatives = [tuple(e) for key in ("neg_train", "neg_val", "neg_test") for e in split.roles()[key].tolist()]
    assert sorted(positives) == sorted(edges)
    assert len(negatives) == len(set(negatives)) == g.m
    for u, v in negatives:
        assert u != v and u < v
        assert (u, v) not in edges
    for pos, neg in (("pos_train", "neg_train"), ("pos_val", "neg_val"), ("pos_test", "neg_test")):
        assert len(split.roles()[pos]) == len(split.roles()[neg])


def test_edge_split_sparse_graph():
    g = cycle_graph(100)
    split = generate_edge_split(g, seed=3)
    assert (len(split.pos_train), len(split.pos_val), len(split.pos_test)) == (64, 16, 20)
    _assert_valid_edge_split(g, split)


def test_edge_split_enumerated_negatives():
    # density 12/45 is above the enumeration threshold but still feasible
    edges = [(i, (i + 1) % 10) for i in range(10)] + [(0, 5), (2, 7)]
    g = Graph.from_edges("dense", 10, edges)
    _assert_valid_edge_split(g, generate_edge_split(g, seed=0))


def test_edge_split_infeasible_when_too_dense():
    g = complete_graph(5)
    almost = Graph.from_edges("k5-e", 5, g.edges.tolist()[1:])
    with pytest.raises(DataError, match="non-edges"):
        generate_edge_split(almost, 0)


def test_edge_split_needs_five_edges():
    with pytest.raises(DataError):
        generate_edge_split(cycle_graph(4), 0)


def test_edge_split_file_reload(tmp_path):
    g = cycle_graph(40)
    split = generate_edge_split(g, seed=5)
    save_edge_split(split, str(tmp_path / "split.csv"))
    loaded = load_edge_split(str(tmp_path / "split.csv"), seed=5)
    for role, arr in split.roles().items():
        np.testing.assert_array_equal(loaded.roles()[role], arr)
