import networkx as nx
import numpy as np
import pytest

from diagram import generate_random, parse_diagram
from graph import (
    UNREACHABLE,
    all_pairs_distances,
    bfs_distances,
    build_graph,
    graph_from_matrix,
    intersects,
    is_connected,
)


def to_networkx(g):
    out = nx.Graph()
    out.add_nodes_from(range(1, g.n + 1))
    out.add_edges_from(g.edges())
    return out


def test_d5_edges(d5_graph):
    assert d5_graph.edges() == [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)]
    assert d5_graph.m == 7
    assert d5_graph.neighbors(3) == (1, 2, 4, 5)
    assert d5_graph.has_edge(2, 4) and d5_graph.has_edge(4, 2)
    assert not d5_graph.has_edge(1, 4)


def test_intersects_uses_either_line(d5):
    # (3, 5) meet only on the bottom line, (2, 3) only on the top line
    assert intersects(d5[3], d5[5])
    assert intersects(d5[2], d5[3])
    assert not intersects(d5[1], d5[4])


def test_c4_is_a_four_cycle(c4):
    g = build_graph(c4)
    assert g.edges() == [(1, 3), (1, 4), (2, 3), (2, 4)]


def test_build_graph_matches_pairwise_predicate():
    diag = generate_random(40, seed=5)
    g = build_graph(diag)
    for i in range(1, diag.n + 1):
        for j in range(i + 1, diag.n + 1):
            assert g.has_edge(i, j) == intersects(diag[i], diag[j])
    assert not g.matrix[0].any()
    assert not np.diag(g.matrix).any()


def test_bfs_distances_d5(d5_graph):
    dist = bfs_distances(d5_graph, 1)
    assert dist[0] == UNREACHABLE
    assert list(dist[1:]) == [0, 1, 1, 2, 2]


def test_disconnected_graph():
    g = build_graph(parse_diagram("2\n1 2 1 2\n3 4 3 4\n"))
    assert g.m == 0
    assert not is_connected(g)
    assert bfs_distances(g, 1)[2] == UNREACHABLE
    assert all_pairs_distances(g)[1, 2] == UNREACHABLE


def test_single_vertex_is_connected():
    g = build_graph(parse_diagram("1\n1 4 2 5\n"))
    assert is_connected(g)
    assert g.edges() == []


def test_all_pairs_distances_d5(d5_graph):
    dist = all_pairs_distances(d5_graph)
    assert dist[1, 5] == 2
    assert dist[2, 5] == 2
    assert dist[4, 4] == 0
    assert (dist == dist.T).all()


@pytest.mark.parametrize('mode', ['general', 'interval', 'permutation'])
def test_all_pairs_distances_match_networkx(mode):
    g = build_graph(generate_random(30, seed=2, mode=mode))
    dist = all_pairs_distances(g)
    reference = dict(nx.all_pairs_shortest_path_length(to_networkx(g)))
    for u in range(1, g.n + 1):
        for v in range(1, g.n + 1):
            assert dist[u, v] == reference[u][v]


def test_graph_from_matrix_round_trip(d5_graph):
    again = graph_from_matrix(d5_graph.matrix)
    assert again.adjacency == d5_graph.adjacency
