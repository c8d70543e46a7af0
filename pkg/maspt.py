import logging
from dataclasses import dataclass

from graph import all_pairs_distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarkedSubgraph:
    """
    M*: all alternative shortest paths between the root and L_h.

    P[i] / F[i] are the marked / unmarked vertices of level i; edges holds every
    graph edge (u, w) with u in P[i] and w in P[i + 1].
    """
    marked: tuple
    P: tuple
    F: tuple
    edges: tuple

    def layer_sizes(self):
        return [len(p) for p in self.P]


def mark_shortest_paths(g, t):
    """
    Algorithm MASPT as a level sweep from h-1 down to 0.

    A vertex of L_i is marked iff it has a marked neighbor in L_{i+1}; the
    result is the projection of the BFS tree onto marked vertices plus every
    level-crossing edge between them.

    Args:
        g: IntersectionGraph
        t: LeveledTree built on g

    Returns:
        MarkedSubgraph
    """
    h = t.height
    marked = [False] * (g.n + 1)
    P = [frozenset()] * (h + 1)
    P[h] = frozenset(t.level_sets[h])
    for v in P[h]:
        marked[v] = True

    edges = []
    for i in range(h - 1, -1, -1):
        below = P[i + 1]
        layer = []
        for v in t.level_sets[i]:
            hits = [w for w in g.adjacency[v] if w in below]
            if hits:
                layer.append(v)
                marked[v] = True
                edges.extend((v, w) for w in hits)
        P[i] = frozenset(layer)

    F = tuple(frozenset(t.level_sets[i]) - P[i] for i in range(h + 1))
    logger.debug("MASPT layer sizes %s", [len(p) for p in P])
    return MarkedSubgraph(
        marked=tuple(marked),
        P=tuple(P),
        F=F,
        edges=tuple(sorted(edges)),
    )


def verify_marked_semantics(g, t, m):
    """
    Compare a marking against the distance oracle.

    Checks that v is in P_i exactly when some w in L_h has d_G(v, w) = h - i,
    and that no F_i vertex touches P_{i+1}.

    Returns:
        Tuple (ok, violations)
    """
    h = t.height
    dist = all_pairs_distances(g)
    last = list(t.level_sets[h])
    violations = []

    if set(m.P[h]) != set(t.level_sets[h]):
        violations.append(f"P_{h} differs from L_{h}")

    for i in range(h + 1):
        level_set = set(t.level_sets[i])
        if m.P[i] & m.F[i] or (m.P[i] | m.F[i]) != level_set:
            violations.append(f"P_{i} and F_{i} do not partition L_{i}")
        for v in t.level_sets[i]:
            on_path = any(dist[v, w] == h - i for w in last)
            if on_path != (v in m.P[i]):
                state = 'missing from' if on_path else 'wrongly in'
                violations.append(f"vertex {v} {state} P_{i}")

    for i in range(h):
        for x in m.F[i]:
            for y in m.P[i + 1]:
                if g.has_edge(x, y):
                    violations.append(f"F_{i} vertex {x} adjacent to P_{i + 1} vertex {y}")

    return not violations, violations
