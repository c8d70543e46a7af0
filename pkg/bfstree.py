import logging
from dataclasses import dataclass

from graph import DisconnectedGraphError, UNREACHABLE, bfs_distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeveledTree:
    """
    Rooted BFS tree T*(1).

    parent and level are 1-indexed (slot 0 unused, parent of the root is 0);
    level_sets[i] is the ascending tuple of vertices at distance i from the root.
    """
    parent: tuple
    level: tuple
    level_sets: tuple
    main_path: tuple
    fallbacks: int = 0

    @property
    def n(self):
        return len(self.parent) - 1

    @property
    def height(self):
        return len(self.level_sets) - 1

    @property
    def k(self):
        return len(self.main_path) - 1


def build_bfs_tree(g, diag):
    """
    Build T*(1) with the dominating-parent rule.

    For each level i, B is the vertex of L_i with maximum b and D the one with
    maximum d. A vertex of L_{i+1} takes B when adjacent, else D, else its
    max-b neighbor in L_i (counted as a fallback).

    Args:
        g: connected IntersectionGraph
        diag: canonical Diagram the graph was built from

    Returns:
        LeveledTree
    """
    level = [int(x) for x in bfs_distances(g, 1)]
    missing = [v for v in range(1, g.n + 1) if level[v] == UNREACHABLE]
    if missing:
        raise DisconnectedGraphError(f"vertices {missing[:10]} unreachable from vertex 1")

    height = max(level[1:])
    buckets = [[] for _ in range(height + 1)]
    for v in range(1, g.n + 1):
        buckets[level[v]].append(v)
    level_sets = tuple(tuple(bucket) for bucket in buckets)

    parent = [0] * (g.n + 1)
    fallbacks = 0
    for i in range(height):
        current = level_sets[i]
        top = max(current, key=lambda v: diag[v].b)
        bottom = max(current, key=lambda v: diag[v].d)
        for v in level_sets[i + 1]:
            if g.has_edge(v, top):
                parent[v] = top
            elif g.has_edge(v, bottom):
                parent[v] = bottom
            else:
                candidates = [u for u in g.adjacency[v] if level[u] == i]
                parent[v] = max(candidates, key=lambda u: diag[u].b)
                fallbacks += 1
                logger.warning("level %d: vertex %d adjacent to neither B=%d nor D=%d, parent %d",
                               i + 1, v, top, bottom, parent[v])

    path = _walk_to_root(parent, g.n)

    return LeveledTree(
        parent=tuple(parent),
        level=tuple(level),
        level_sets=level_sets,
        main_path=path,
        fallbacks=fallbacks,
    )


def _walk_to_root(parent, v):
    path = [v]
    while parent[path[-1]]:
        path.append(parent[path[-1]])
    return tuple(reversed(path))


def main_path(t):
    """Tree path 1 = u_0, ..., u_k = n obtained by walking parents from n."""
    return _walk_to_root(t.parent, t.n)


def internal_nodes(t):
    """Per level 0..h-1, the sorted distinct parents used by the next level."""
    return [
        tuple(sorted({t.parent[v] for v in t.level_sets[i + 1]}))
        for i in range(t.height)
    ]


def internal_node_count_per_level(t, g):
    return [len(nodes) for nodes in internal_nodes(t)]


def check_internal_node_lemmas(t, g, diag):
    """
    Check structural properties of internal nodes.

    Returns:
        Dict mapping property label ('2a', '2b', '2c', '2d', '2e', '2f') to a
        list of human-readable violations
    """
    findings = {key: [] for key in ('2a', '2b', '2c', '2d', '2e', '2f')}
    n = t.n

    for i, nodes in enumerate(internal_nodes(t)):
        if len(nodes) > 2:
            findings['2b'].append(f"level {i}: {len(nodes)} internal nodes {list(nodes)}")
        for x in nodes:
            for y in nodes:
                if x >= y:
                    continue
                if not g.has_edge(x, y):
                    findings['2c'].append(f"level {i}: internal nodes {x},{y} not adjacent")
                # order so that b_j < b_i
                hi, lo = (x, y) if diag[x].b > diag[y].b else (y, x)
                if not diag[hi].d < diag[lo].d:
                    findings['2a'].append(f"level {i}: b_{lo} < b_{hi} but d_{hi} > d_{lo}")

        if len(nodes) == 2 and i + 1 < t.height:
            for j, other in (nodes, tuple(reversed(nodes))):
                children_j = [m for m in t.level_sets[i + 1] if t.parent[m] == j]
                internal_next = {t.parent[w] for w in t.level_sets[i + 2]}
                for k in t.level_sets[i + 1]:
                    if t.parent[k] != other or k not in internal_next:
                        continue
                    for m_ in children_j:
                        if not (g.has_edge(m_, k) or g.has_edge(m_, other)):
                            findings['2d'].append(f"level {i + 1}: vertex {m_} misses both {k} and {other}")

        if len(nodes) == 2 and t.level[n] == i + 1:
            j = t.parent[n]
            other = nodes[0] if nodes[1] == j else nodes[1]
            for k in t.level_sets[i + 1]:
                if t.parent[k] == other and not (g.has_edge(k, n) or g.has_edge(k, j)):
                    findings['2e'].append(f"level {i + 1}: vertex {k} misses both {n} and {j}")

    if t.level[n] < t.height:
        for v in t.level_sets[t.level[n] + 1]:
            if t.parent[v] != n:
                findings['2f'].append(f"vertex {v} below n has parent {t.parent[v]}")

    for key, items in findings.items():
        # 2d-2f are observed, not relied upon
        log = logger.warning if key in ('2a', '2b', '2c') else logger.debug
        for item in items:
            log("internal-node property %s: %s", key, item)
    return findings
