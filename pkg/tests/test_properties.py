import networkx as nx
from hypothesis import given, settings, example
import hypothesis.strategies as st

from bfstree import build_bfs_tree, check_internal_node_lemmas
from diagram import MODES, canonicalize, generate_random, serialize, parse_diagram
from graph import build_graph
from maspt import mark_shortest_paths, verify_marked_semantics
from spanner import BRANCHES, build_tree3spanner
from verify import (
    all_pairs_stretch_check,
    check_spanning_tree,
    exhaustive_best_tree_stretch,
    max_edge_stretch,
    tree_distance,
)

instances = st.tuples(
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=0, max_value=2 ** 31 - 1),
    st.sampled_from(MODES),
)
tiny_instances = st.tuples(
    st.integers(min_value=1, max_value=7),
    st.integers(min_value=0, max_value=2 ** 31 - 1),
    st.sampled_from(MODES),
)


@settings(deadline=None, max_examples=60)
@given(instances)
@example((1, 0, 'general'))
@example((2, 0, 'permutation'))
def test_output_is_spanning_tree(instance):
    diag = generate_random(*instance)
    g = build_graph(diag)
    tree, trace = build_tree3spanner(diag)
    assert check_spanning_tree(g, tree)

    t = nx.Graph()
    t.add_nodes_from(range(1, g.n + 1))
    t.add_edges_from(tree.edges())
    assert nx.is_tree(t)

    assert set(trace.branches()) <= set(BRANCHES)
    spine = trace.spine
    bfs = build_bfs_tree(g, diag)
    for i, u in enumerate(spine):
        assert bfs.level[u] == i


@settings(deadline=None, max_examples=60)
@given(instances)
def test_edge_check_agrees_with_all_pairs_check(instance):
    diag = generate_random(*instance)
    g = build_graph(diag)
    tree, _ = build_tree3spanner(diag)
    for t in (1, 2, 3):
        assert max_edge_stretch(g, tree, t).ok == all_pairs_stretch_check(g, tree, t)


@settings(deadline=None, max_examples=60)
@given(instances)
def test_bfs_structure(instance):
    diag = generate_random(*instance)
    g = build_graph(diag)
    bfs = build_bfs_tree(g, diag)
    assert bfs.fallbacks == 0
    findings = check_internal_node_lemmas(bfs, g, diag)
    assert findings['2a'] == [] and findings['2c'] == []
    ok, violations = verify_marked_semantics(g, bfs, mark_shortest_paths(g, bfs))
    assert ok, violations


@settings(deadline=None, max_examples=40)
@given(tiny_instances)
def test_exhaustive_optimum_bounds_construction(instance):
    diag = generate_random(*instance)
    g = build_graph(diag)
    tree, _ = build_tree3spanner(diag)
    assert exhaustive_best_tree_stretch(g) <= max_edge_stretch(g, tree).max_stretch <= 3


@settings(deadline=None, max_examples=30)
@given(instances, st.data())
def test_tree_distance_is_a_metric(instance, data):
    diag = generate_random(*instance)
    tree, _ = build_tree3spanner(diag)
    vertex = st.integers(min_value=1, max_value=diag.n)
    u, v, w = data.draw(vertex), data.draw(vertex), data.draw(vertex)
    assert tree_distance(tree, u, v) == tree_distance(tree, v, u)
    assert (tree_distance(tree, u, v) == 0) == (u == v)
    assert tree_distance(tree, u, w) <= tree_distance(tree, u, v) + tree_distance(tree, v, w)


@settings(deadline=None, max_examples=30)
@given(instances)
def test_serialized_diagram_is_canonical(instance):
    diag = generate_random(*instance)
    again = parse_diagram(serialize(diag))
    assert canonicalize(again)[0] == diag
