import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from graph import all_pairs_distances

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 3
EXHAUSTIVE_LIMIT = 9


class NotSpanningTreeError(ValueError):
    """Raised when a parent array is not a spanning tree of the graph."""


class InstanceTooLargeError(ValueError):
    """Raised when the exhaustive oracle is asked for more than its vertex limit."""


@dataclass(frozen=True)
class StretchReport:
    max_stretch: int
    threshold: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def to_text(self):
        items = ' '.join(f"({u},{v},{d})" for u, v, d in self.violations)
        return f"max_stretch={self.max_stretch} threshold={self.threshold} violations=[{items}]"


def tree_depths(parent):
    """
    Depth of every vertex below the root of a parent array.

    Args:
        parent: 1-indexed sequence, 0 marks the root (slot 0 ignored)

    Returns:
        Tuple (root, depth array); raises NotSpanningTreeError on a cycle or
        when the array does not have exactly one root
    """
    n = len(parent) - 1
    roots = [v for v in range(1, n + 1) if parent[v] == 0]
    if len(roots) != 1:
        raise NotSpanningTreeError(f"expected exactly one root, found {len(roots)}: {roots[:10]}")

    depth = [-1] * (n + 1)
    depth[roots[0]] = 0
    for v in range(1, n + 1):
        chain = []
        u = v
        while depth[u] < 0:
            chain.append(u)
            u = parent[u]
            if u < 1 or u > n:
                raise NotSpanningTreeError(f"vertex {chain[-1]} has parent {u} outside 1..{n}")
            if len(chain) > n:
                raise NotSpanningTreeError(f"parent links starting at vertex {v} form a cycle")
        for w in reversed(chain):
            depth[w] = depth[parent[w]] + 1
    return roots[0], np.asarray(depth, dtype=np.int64)


def check_spanning_tree(g, tree):
    """Raise NotSpanningTreeError unless tree.parent spans g with graph edges only."""
    parent = tree.parent
    if len(parent) != g.n + 1:
        raise NotSpanningTreeError(f"tree covers {len(parent) - 1} vertices, graph has {g.n}")
    tree_depths(parent)
    for v in range(1, g.n + 1):
        p = parent[v]
        if p and not g.has_edge(v, p):
            raise NotSpanningTreeError(f"tree edge ({p},{v}) is not an edge of the graph")
    return True


def tree_distance(tree, u, v, depth=None):
    """Edges on the tree path u..v, by climbing the deeper end until both meet."""
    parent = tree.parent
    if depth is None:
        _, depth = tree_depths(parent)
    steps = 0
    while u != v:
        if depth[u] >= depth[v]:
            u = parent[u]
        else:
            v = parent[v]
        steps += 1
    return steps


def edge_tree_distances(g, tree, depth=None):
    """
    Tree distance for every graph edge at once.

    Returns:
        Tuple (edges as (m, 2) int array, distances as int array of length m)
    """
    edges = np.asarray(g.edges(), dtype=np.int64).reshape(-1, 2)
    parent = np.asarray(tree.parent, dtype=np.int64)
    if depth is None:
        _, depth = tree_depths(tree.parent)

    u, v = edges[:, 0].copy(), edges[:, 1].copy()
    dist = np.zeros(len(edges), dtype=np.int64)
    active = u != v
    while active.any():
        up_u = active & (depth[u] >= depth[v])
        up_v = active & ~up_u
        u[up_u] = parent[u[up_u]]
        v[up_v] = parent[v[up_v]]
        dist[active] += 1
        active = u != v
    return edges, dist


def max_edge_stretch(g, tree, t=DEFAULT_THRESHOLD):
    """
    Largest tree distance over the graph's edges, with the edges exceeding t.

    Args:
        g: IntersectionGraph
        tree: anything with a 1-indexed parent array spanning g
        t: stretch threshold

    Returns:
        StretchReport
    """
    edges, dist = edge_tree_distances(g, tree)
    if len(dist) == 0:
        return StretchReport(max_stretch=0, threshold=t)
    over = np.flatnonzero(dist > t)
    violations = [(int(edges[k, 0]), int(edges[k, 1]), int(dist[k])) for k in over]
    return StretchReport(max_stretch=int(dist.max()), threshold=t, violations=violations)


def tree_distance_matrix(tree):
    n = len(tree.parent) - 1
    rows = [v - 1 for v in range(1, n + 1) if tree.parent[v]]
    cols = [tree.parent[v] - 1 for v in range(1, n + 1) if tree.parent[v]]
    adjacency = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    dist = shortest_path(adjacency, method='D', directed=False, unweighted=True)
    out = np.full((n + 1, n + 1), -1, dtype=np.int64)
    out[1:, 1:] = np.where(np.isfinite(dist), dist, -1).astype(np.int64)
    return out


def all_pairs_stretch_check(g, tree, t=DEFAULT_THRESHOLD):
    """Definitional check d_T(u, v) <= t * d_G(u, v) over every vertex pair."""
    graph_dist = all_pairs_distances(g)[1:, 1:]
    tree_dist = tree_distance_matrix(tree)[1:, 1:]
    if (tree_dist < 0).any():
        return False
    return bool((tree_dist <= t * graph_dist).all())


def _forest_stretch(n, chosen, edges, comp):
    adjacency = [[] for _ in range(n + 1)]
    for u, v in chosen:
        adjacency[u].append(v)
        adjacency[v].append(u)

    dist_from = {}
    worst = 0
    for u, v in edges:
        if comp[u] != comp[v]:
            continue
        if u not in dist_from:
            dist = {u: 0}
            frontier = [u]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in adjacency[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            dist_from[u] = dist
        worst = max(worst, dist_from[u][v])
    return worst


def exhaustive_best_tree(g, limit=EXHAUSTIVE_LIMIT):
    """
    A spanning tree of g with the minimum max edge stretch.

    Edges are included or excluded one at a time with union-find style
    component labels; a partial forest is abandoned as soon as some graph
    edge inside one of its components already stretches to the best value
    found so far.

    Args:
        g: connected IntersectionGraph with at most `limit` vertices

    Returns:
        Tuple (optimum, tree edges); optimum is 0 for a single vertex
    """
    n = g.n
    if n > limit:
        raise InstanceTooLargeError(f"exhaustive oracle is limited to n <= {limit}, got n={n}")
    if n == 1:
        return 0, []

    edges = g.edges()
    floor = 1 if len(edges) == n - 1 else 2
    best = [math.inf]
    best_edges = []

    def search(idx, chosen, comp):
        if best[0] <= floor:
            return
        if len(chosen) == n - 1:
            stretch = _forest_stretch(n, chosen, edges, comp)
            if stretch < best[0]:
                best[0] = stretch
                best_edges[:] = chosen
            return
        if len(edges) - idx < n - 1 - len(chosen):
            return
        u, v = edges[idx]
        if comp[u] != comp[v]:
            old, new = comp[v], comp[u]
            merged = [new if c == old else c for c in comp]
            grown = chosen + [(u, v)]
            if _forest_stretch(n, grown, edges, merged) < best[0]:
                search(idx + 1, grown, merged)
        search(idx + 1, chosen, comp)

    search(0, [], list(range(n + 1)))
    if math.isinf(best[0]):
        raise NotSpanningTreeError("graph is disconnected; no spanning tree exists")
    logger.debug("exhaustive optimum %d over n=%d m=%d", best[0], n, len(edges))
    return int(best[0]), list(best_edges)


def exhaustive_best_tree_stretch(g, limit=EXHAUSTIVE_LIMIT):
    """Minimum max edge stretch over all spanning trees of g (0 for a single vertex)."""
    return exhaustive_best_tree(g, limit)[0]


def parents_from_edges(n, edges, root=1):
    """Parent array (1-indexed, 0 for the root) of the tree with the given edges."""
    adjacency = [[] for _ in range(n + 1)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    parent = [0] * (n + 1)
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(adjacency[u]):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                queue.append(w)
    if len(seen) != n:
        raise NotSpanningTreeError(f"edges reach {len(seen)} of {n} vertices")
    return parent
