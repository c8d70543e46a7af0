import networkx as nx
import pytest

from conftest import D5_STRETCH3_TREE, interval_diagram
from diagram import generate_random, parse_diagram
from graph import all_pairs_distances, build_graph
from spanner import SpannerTree, build_tree3spanner, parse_tree
from verify import (
    InstanceTooLargeError,
    NotSpanningTreeError,
    StretchReport,
    all_pairs_stretch_check,
    check_spanning_tree,
    edge_tree_distances,
    exhaustive_best_tree,
    exhaustive_best_tree_stretch,
    max_edge_stretch,
    parents_from_edges,
    tree_depths,
    tree_distance,
)


@pytest.fixture
def d5_tree():
    return parse_tree(D5_STRETCH3_TREE, n=5)


def test_tree_distance(d5_tree):
    assert tree_distance(d5_tree, 2, 4) == 3
    assert tree_distance(d5_tree, 4, 2) == 3
    assert tree_distance(d5_tree, 3, 3) == 0
    assert tree_distance(d5_tree, 3, 5) == 1


def test_tree_depths(d5_tree):
    root, depth = tree_depths(d5_tree.parent)
    assert root == 1
    assert list(depth[1:]) == [0, 2, 1, 3, 2]


def test_edge_distances_match_pairwise_walks(d5_graph, d5_tree):
    edges, dist = edge_tree_distances(d5_graph, d5_tree)
    for (u, v), d in zip(edges.tolist(), dist.tolist()):
        assert d == tree_distance(d5_tree, u, v)


def test_max_edge_stretch_d5(d5_graph, d5_tree):
    report = max_edge_stretch(d5_graph, d5_tree, 3)
    assert report.ok
    assert report.to_text() == "max_stretch=3 threshold=3 violations=[]"

    report = max_edge_stretch(d5_graph, d5_tree, 2)
    assert report.violations == [(2, 4, 3)]
    assert report.to_text() == "max_stretch=3 threshold=2 violations=[(2,4,3)]"


def test_graph_that_is_a_tree_has_stretch_one(chain4):
    g = build_graph(chain4)
    tree = SpannerTree(parent=(0, 0, 1, 2, 3))
    assert max_edge_stretch(g, tree, 1).ok
    assert all_pairs_stretch_check(g, tree, 1)


def test_single_vertex_report():
    g = build_graph(parse_diagram("1\n1 4 2 5\n"))
    report = max_edge_stretch(g, SpannerTree(parent=(0, 0)))
    assert report == StretchReport(max_stretch=0, threshold=3)


def test_all_pairs_check_d5(d5_graph, d5_tree):
    assert all_pairs_stretch_check(d5_graph, d5_tree, 3)
    assert not all_pairs_stretch_check(d5_graph, d5_tree, 1)


def test_check_spanning_tree_rejects_bad_trees(d5_graph):
    assert check_spanning_tree(d5_graph, parse_tree(D5_STRETCH3_TREE))
    with pytest.raises(NotSpanningTreeError, match='cycle'):
        check_spanning_tree(d5_graph, parse_tree("5\n0 3 4 5 3\n"))
    with pytest.raises(NotSpanningTreeError, match='exactly one root'):
        check_spanning_tree(d5_graph, parse_tree("5\n0 0 1 3 3\n"))
    with pytest.raises(NotSpanningTreeError, match='not an edge'):
        check_spanning_tree(d5_graph, parse_tree("5\n0 3 1 1 3\n"))
    with pytest.raises(NotSpanningTreeError, match='graph has 5'):
        check_spanning_tree(d5_graph, SpannerTree(parent=(0, 0, 1)))


def test_exhaustive_oracle_small_graphs(d5_graph, c4, chain4):
    assert exhaustive_best_tree_stretch(d5_graph) == 2
    assert exhaustive_best_tree_stretch(build_graph(c4)) == 3
    assert exhaustive_best_tree_stretch(build_graph(chain4)) == 1
    assert exhaustive_best_tree_stretch(build_graph(parse_diagram("1\n1 4 2 5\n"))) == 0


def test_exhaustive_tree_reaches_its_optimum(d5_graph, c4):
    for g in (d5_graph, build_graph(c4)):
        optimum, edges = exhaustive_best_tree(g)
        assert len(edges) == g.n - 1
        tree = SpannerTree(parent=tuple(parents_from_edges(g.n, edges)))
        assert check_spanning_tree(g, tree)
        assert max_edge_stretch(g, tree).max_stretch == optimum
    assert exhaustive_best_tree(build_graph(parse_diagram("1\n1 4 2 5\n"))) == (0, [])


def test_parents_from_edges():
    assert parents_from_edges(5, [(1, 3), (2, 3), (3, 5), (4, 5)]) == [0, 0, 3, 1, 5, 3]
    with pytest.raises(NotSpanningTreeError):
        parents_from_edges(4, [(1, 2), (3, 4)])


def test_exhaustive_oracle_refuses_large_instances():
    g = build_graph(interval_diagram([(2 * k + 1, 2 * k + 4) for k in range(12)]))
    with pytest.raises(InstanceTooLargeError):
        exhaustive_best_tree_stretch(g)


def to_networkx_tree(tree):
    t = nx.Graph()
    t.add_nodes_from(range(1, len(tree.parent)))
    t.add_edges_from((v, p) for v, p in enumerate(tree.parent) if v and p)
    return t


@pytest.mark.parametrize('mode', ['general', 'interval', 'permutation'])
@pytest.mark.parametrize('seed', range(4))
def test_verifier_agrees_with_networkx(mode, seed):
    diag = generate_random(35, seed=seed, mode=mode)
    g = build_graph(diag)
    tree, _ = build_tree3spanner(diag)
    t = to_networkx_tree(tree)
    assert nx.is_tree(t)

    lengths = dict(nx.all_pairs_shortest_path_length(t))
    graph_dist = all_pairs_distances(g)
    for u in range(1, g.n + 1):
        for v in range(u, g.n + 1):
            assert tree_distance(tree, u, v) == lengths[u][v]
            assert graph_dist[u, v] <= lengths[u][v]

    for threshold in (1, 2, 3):
        assert max_edge_stretch(g, tree, threshold).ok == all_pairs_stretch_check(g, tree, threshold)


@pytest.mark.parametrize('seed', range(10))
def test_oracle_never_beats_itself(seed):
    diag = generate_random(7, seed=seed)
    g = build_graph(diag)
    tree, _ = build_tree3spanner(diag)
    assert exhaustive_best_tree_stretch(g) <= max_edge_stretch(g, tree).max_stretch <= 3
