import logging
from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

logger = logging.getLogger(__name__)

# edge visits allowed for the spine search, spread over its prefix checks
SEARCH_WORK = 4_000_000
MIN_SEARCH_NODES = 64


def spine_domains(g, level, spine, upto=None):
    """
    Spine indices each off-spine vertex may hang from.

    spine[j] sits at level j, so a vertex at level l can only reach indices
    l-1, l and l+1.

    Args:
        g: IntersectionGraph
        level: BFS level per vertex
        spine: spine prefix s_0, ..., s_m
        upto: only vertices with level <= upto (default: all)

    Returns:
        Dict vertex -> tuple of indices, or None when some vertex has none
    """
    on_spine = set(spine)
    last = len(spine) - 1
    domains = {}
    for v in range(1, g.n + 1):
        lvl = level[v]
        if v in on_spine or (upto is not None and lvl > upto):
            continue
        options = tuple(j for j in (lvl - 1, lvl, lvl + 1) if 0 <= j <= last and g.matrix[v, spine[j]])
        if not options:
            return None
        domains[v] = options
    return domains


def _topological_rank(graph, labels, count):
    coo = graph.tocoo()
    src, dst = labels[coo.row], labels[coo.col]
    keep = src != dst
    dag = csr_matrix(
        (np.ones(int(keep.sum()), dtype=np.int32), (src[keep], dst[keep])),
        shape=(count, count),
    )
    indegree = np.diff(dag.tocsc().indptr)
    ready = deque(int(c) for c in np.flatnonzero(indegree == 0))
    rank = np.zeros(count, dtype=np.int64)
    position = 0
    while ready:
        c = ready.popleft()
        rank[c] = position
        position += 1
        for d in dag.indices[dag.indptr[c]:dag.indptr[c + 1]]:
            indegree[d] -= 1
            if indegree[d] == 0:
                ready.append(int(d))
    return rank


def solve_2sat(num_vars, src, dst):
    """
    Solve a 2-SAT instance given as an implication graph.

    Literal k < num_vars is variable k, literal k + num_vars its negation;
    every arc src -> dst reads "src implies dst".

    Returns:
        Boolean array of length num_vars, or None when unsatisfiable
    """
    if num_vars == 0:
        return np.zeros(0, dtype=bool)
    nodes = 2 * num_vars
    graph = csr_matrix(
        (np.ones(len(src), dtype=np.int32), (np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64))),
        shape=(nodes, nodes),
    )
    count, labels = connected_components(graph, directed=True, connection='strong')
    if np.any(labels[:num_vars] == labels[num_vars:]):
        return None
    rank = _topological_rank(graph, labels, count)
    return rank[labels[:num_vars]] > rank[labels[num_vars:]]


def assign_leaves(g, level, spine, upto=None):
    """
    Hang every off-spine vertex from the spine so that all edges stretch <= 3.

    With leaves only, an edge between leaves on spine indices p and q has
    tree length 2 + |p - q|, so the constraint is |p - q| <= 1; edges that
    touch the spine stay within 3 once indices are level-bounded. Each vertex
    at level l gets two order variables, [index >= l] and [index >= l + 1],
    which turns every constraint into a 2-clause.

    Returns:
        Dict vertex -> spine index, or None when no such assignment exists
    """
    domains = spine_domains(g, level, spine, upto)
    if domains is None:
        return None
    order = sorted(domains)
    if not order:
        return {}

    count = len(order)
    num_vars = 2 * count
    lv = np.asarray([level[v] for v in order], dtype=np.int64)
    low = np.arange(count, dtype=np.int64) * 2
    high = low + 1
    src, dst = [], []

    def imply(a, b):
        src.extend((a, b + num_vars if b < num_vars else b - num_vars))
        dst.extend((b, a + num_vars if a < num_vars else a - num_vars))

    for k, v in enumerate(order):
        lvl, options = level[v], domains[v]
        imply(high[k], low[k])
        if lvl - 1 not in options:
            imply(low[k] + num_vars, low[k])
        if lvl + 1 not in options:
            imply(high[k], high[k] + num_vars)
        if lvl not in options:
            imply(low[k], high[k])

    idx = np.asarray(order, dtype=np.int64)
    p, q = np.nonzero(g.matrix[np.ix_(idx, idx)])
    arcs = []
    same = lv[p] == lv[q]
    arcs.append((high[p[same]], low[q[same]]))
    down = lv[q] == lv[p] - 1
    arcs.append((low[p[down]], low[q[down]]))
    arcs.append((high[p[down]], high[q[down]]))
    a = np.concatenate([src] + [x for x, _ in arcs] + [y + num_vars for _, y in arcs]).astype(np.int64)
    b = np.concatenate([dst] + [y for _, y in arcs] + [x + num_vars for x, _ in arcs]).astype(np.int64)

    values = solve_2sat(num_vars, a, b)
    if values is None:
        return None
    index = {}
    for k, v in enumerate(order):
        lvl = level[v]
        index[v] = lvl - 1 if not values[low[k]] else (lvl if not values[high[k]] else lvl + 1)
    return index


def is_spine(g, level_sets, spine):
    """True when spine is a path of g from vertex 1 with spine[j] at level j, down to the last level."""
    if len(spine) != len(level_sets) or not spine or spine[0] != 1:
        return False
    for j in range(1, len(spine)):
        if spine[j] not in level_sets[j] or not g.matrix[spine[j - 1], spine[j]]:
            return False
    return True


def main_path_spine(g, tree, diag):
    """The BFS main path, extended by the max-b vertex of the last level when n is one level short."""
    path = list(tree.main_path)
    if len(path) == tree.height:
        below = [v for v in tree.level_sets[-1] if g.matrix[path[-1], v]]
        if below:
            path.append(max(below, key=lambda v: diag[v].b))
    return tuple(path)


def _candidates(g, tree, marked, diag, prefix, preferred):
    j = len(prefix)
    last = prefix[-1]
    options = [v for v in tree.level_sets[j] if v in marked.P[j] and g.matrix[last, v]]
    if not options:
        return []
    ranked = [s[j] for s in preferred if len(s) > j]
    ranked.append(max(options, key=lambda v: diag[v].b))
    ranked.append(max(options, key=lambda v: diag[v].d))
    ranked.extend(sorted(options, key=lambda v: -diag[v].b))
    allowed = set(options)
    seen = []
    for v in ranked:
        if v in allowed and v not in seen:
            seen.append(v)
    return seen


def search_spine(g, tree, marked, diag, preferred=(), budget=None):
    """
    Find a spine with a stretch-3 leaf assignment.

    Whole preferred spines are tried first. After that, a depth-first search
    extends spines level by level and drops any prefix whose completed
    levels already admit no assignment.

    Args:
        preferred: candidate spines, tried in order and used to rank the search
        budget: number of search nodes (default: scaled to the edge count)

    Returns:
        Tuple (spine, vertex -> spine index), or None
    """
    level = tree.level
    if tree.height == 0:
        return (1,), {}

    tried = set()
    for spine in preferred:
        spine = tuple(spine)
        if spine in tried or not is_spine(g, tree.level_sets, spine):
            continue
        tried.add(spine)
        index = assign_leaves(g, level, spine)
        if index is not None:
            return spine, index

    if budget is None:
        budget = max(MIN_SEARCH_NODES, SEARCH_WORK // max(g.m, 1))
    h = tree.height
    prefix = [1]
    stack = [iter(_candidates(g, tree, marked, diag, prefix, preferred))]
    spent = 0
    while stack:
        v = next(stack[-1], None)
        if v is None:
            stack.pop()
            prefix.pop()
            continue
        spent += 1
        if spent > budget:
            logger.debug("spine search stopped after %d nodes", budget)
            return None
        candidate = prefix + [v]
        j = len(candidate) - 1
        if j == h:
            spine = tuple(candidate)
            if spine in tried:
                continue
            index = assign_leaves(g, level, spine)
            if index is not None:
                return spine, index
            continue
        if assign_leaves(g, level, candidate, upto=j - 1) is None:
            continue
        prefix.append(v)
        stack.append(iter(_candidates(g, tree, marked, diag, prefix, preferred)))
    return None


def caterpillar_parents(n, spine, index):
    """Parent array of the spine path plus leaves hung at their spine index."""
    parent = [0] * (n + 1)
    for j in range(1, len(spine)):
        parent[spine[j]] = spine[j - 1]
    for v, j in index.items():
        parent[v] = spine[j]
    return parent
