from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

UNREACHABLE = -1


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a connected intersection graph."""


@dataclass(frozen=True, eq=False)
class IntersectionGraph:
    """
    Intersection graph of a canonical diagram.

    adjacency[v] is the ascending neighbor tuple of vertex v (slot 0 is empty);
    matrix is the (n + 1) x (n + 1) boolean adjacency matrix with row/column 0 unused.
    """
    n: int
    adjacency: tuple
    matrix: np.ndarray

    @property
    def m(self):
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v):
        return self.adjacency[v]

    def has_edge(self, u, v):
        return bool(self.matrix[u, v])

    def edges(self):
        """All edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(1, self.n + 1) for v in self.adjacency[u] if u < v]


def intersects(t_i, t_j):
    """
    Intersection predicate for canonical indices i < j (so b_i < b_j).

    Args:
        t_i: Trapezoid with the smaller canonical index
        t_j: Trapezoid with the larger canonical index

    Returns:
        True iff a_j < b_i or c_j < d_i
    """
    return t_j.a < t_i.b or t_j.c < t_i.d


def graph_from_matrix(matrix):
    """Wrap a symmetric boolean (n + 1) x (n + 1) matrix as an IntersectionGraph."""
    matrix = np.asarray(matrix, dtype=bool)
    n = matrix.shape[0] - 1
    adjacency = [()]
    for v in range(1, n + 1):
        adjacency.append(tuple(int(x) for x in np.flatnonzero(matrix[v])))
    return IntersectionGraph(n=n, adjacency=tuple(adjacency), matrix=matrix)


def build_graph(diag):
    """
    Build the intersection graph of a canonical diagram in O(n^2).

    Args:
        diag: canonical Diagram

    Returns:
        IntersectionGraph
    """
    a, b, c, d = diag.coordinates()
    # hit[i, j] evaluates the predicate for the pair (i, j) read as i < j
    hit = (a[None, :] < b[:, None]) | (c[None, :] < d[:, None])
    upper = np.triu(hit, k=1)
    upper[0, :] = False
    matrix = upper | upper.T
    return graph_from_matrix(matrix)


def bfs_distances(g, src):
    """
    Single-source BFS distances.

    Returns:
        int array of length n + 1; unreachable vertices (and slot 0) hold UNREACHABLE
    """
    dist = np.full(g.n + 1, UNREACHABLE, dtype=np.int64)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g):
    if g.n <= 1:
        return True
    return bool((bfs_distances(g, 1)[1:] != UNREACHABLE).all())


def all_pairs_distances(g):
    """
    All-pairs BFS distance matrix, used as a verification oracle.

    Returns:
        (n + 1) x (n + 1) int array; matrix[u][v] = d_G(u, v), UNREACHABLE where no path exists
    """
    sparse = csr_matrix(g.matrix[1:, 1:].astype(np.int8))
    dist = shortest_path(sparse, method='D', directed=False, unweighted=True)
    out = np.full((g.n + 1, g.n + 1), UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(dist)
    inner = np.where(finite, dist, 0).astype(np.int64)
    inner[~finite] = UNREACHABLE
    out[1:, 1:] = inner
    return out
