import logging
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from bfstree import build_bfs_tree
from diagram import DiagramError, canonicalize, validate
from graph import DisconnectedGraphError, build_graph, is_connected
from maspt import mark_shortest_paths
from repair import caterpillar_parents, main_path_spine, search_spine
from verify import (
    EXHAUSTIVE_LIMIT,
    NotSpanningTreeError,
    check_spanning_tree,
    exhaustive_best_tree,
    max_edge_stretch,
    parents_from_edges,
)

logger = logging.getLogger(__name__)

BRANCHES = ('L7', 'L8', 'L9', 'L10', 'default')
SELECTORS = {'max_b': 'b', 'max_d': 'd'}


class SpannerError(RuntimeError):
    """Raised when the construction reaches a state its invariants exclude."""


class TreeFileError(ValueError):
    """Raised for malformed tree files."""


@dataclass
class SpineState:
    """
    Spine bookkeeping for the window currently being processed.

    u_star[i] is the committed spine vertex at level i (0 while unset);
    u_prime / u_prime_next are the candidates u'_i / u'_{i+1}; alternate_next
    is the max-d candidate kept for the retry.
    """
    u_star: list
    u_prime: int = 0
    u_prime_next: int = 0
    alternate_next: int = 0
    S: frozenset = frozenset()
    S_p: frozenset = frozenset()
    S_pp: frozenset = frozenset()
    S_star: frozenset = frozenset()
    D: frozenset = frozenset()
    maxima: dict = field(default_factory=lambda: dict.fromkeys(('max_b', 'max_d', 'max_b_star', 'max_d_star')))
    selector: str = 'max_b'


@dataclass(frozen=True)
class SpannerTree:
    """Output tree T(1); parent is 1-indexed with 0 for the root and slot 0."""
    parent: tuple
    C: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.parent) - 1

    def edges(self):
        return sorted((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if v and p)

    def to_text(self):
        return f"{self.n}\n{' '.join(str(p) for p in self.parent[1:])}\n"


@dataclass
class LevelRecord:
    level: int
    u_prime: int = 0
    candidate_b: int = 0
    candidate_d: int = 0
    S: frozenset = frozenset()
    S_p: frozenset = frozenset()
    S_pp: frozenset = frozenset()
    S_star: frozenset = frozenset()
    D: frozenset = frozenset()
    branch: str = 'default'
    selector: str = 'max_b'
    retried: bool = False
    stranded: tuple = ()
    u_star_i: int = 0
    u_star_next: int = 0
    maxima: dict = field(default_factory=dict)
    assigned: dict = field(default_factory=dict)
    fallbacks: list = field(default_factory=list)
    findings: list = field(default_factory=list)


@dataclass
class TraceLog:
    n: int = 0
    height: int = 0
    main_path: tuple = ()
    bfs_fallbacks: int = 0
    records: list = field(default_factory=list)
    final: LevelRecord = None
    spine: tuple = ()
    repair: str = ''

    def findings(self):
        return [f for r in self.records for f in r.findings]

    def fallbacks(self):
        out = [f for r in self.records for f in r.fallbacks]
        if self.final is not None:
            out.extend(self.final.fallbacks)
        return out

    def branches(self):
        return [r.branch for r in self.records]

    def to_text(self):
        lines = [
            f"# trace n={self.n} h={self.height} k={len(self.main_path) - 1}",
            f"main_path {_fmt(self.main_path, sort=False)}",
            f"spine {_fmt(self.spine, sort=False)}",
            f"bfs_fallbacks {self.bfs_fallbacks}",
        ]
        for r in self.records:
            lines.append(f"level {r.level}")
            lines.append(f"  u_prime {r.u_prime} candidates max_b={r.candidate_b} max_d={r.candidate_d}")
            lines.append(f"  S {_fmt(r.S)} S' {_fmt(r.S_p)} S'' {_fmt(r.S_pp)} S* {_fmt(r.S_star)} D {_fmt(r.D)}")
            lines.append(f"  branch {r.branch} selector {r.selector} retried {'yes' if r.retried else 'no'}"
                         f" stranded {_fmt(r.stranded)}")
            lines.append(f"  spine u*_{r.level}={r.u_star_i} u*_{r.level + 1}={r.u_star_next}")
            lines.append('  maxima ' + ' '.join(f"{k}={'-' if v is None else v}" for k, v in sorted(r.maxima.items())))
            lines.append(_fmt_assigned(r.assigned))
            lines.append(f"  fallbacks {_fmt_text(r.fallbacks)}")
            lines.append(f"  findings {_fmt_text(r.findings)}")
        if self.final is not None:
            lines.append('final')
            lines.append(_fmt_assigned(self.final.assigned))
            lines.append(f"  fallbacks {_fmt_text(self.final.fallbacks)}")
        if self.repair:
            lines.append(f"repair {self.repair}")
        return '\n'.join(lines) + '\n'


def _fmt(items, sort=True):
    values = sorted(items) if sort else list(items)
    return '[' + ' '.join(str(v) for v in values) + ']'


def _fmt_text(items):
    return '[' + '; '.join(items) + ']'


def _fmt_assigned(assigned):
    parts = [f"C({i},{j}) {_fmt(members)}" for (i, j), members in sorted(assigned.items())]
    return '  ' + (' '.join(parts) if parts else 'C -')


@dataclass
class SpannerContext:
    """Everything one TR3SPT run reads and writes."""
    diag: object
    g: object
    tree: object
    marked: object
    spine: SpineState
    parent: list
    assigned: list
    C: dict
    trace: TraceLog
    record: LevelRecord = None

    @property
    def h(self):
        return self.tree.height

    def adj(self, u, v):
        return bool(self.g.matrix[u, v])

    def argmax(self, vertices, key):
        """Vertex with the largest b (key='b') or d (key='d'); 0 when empty."""
        if not vertices:
            return 0
        return max(vertices, key=lambda v: getattr(self.diag[v], key))


def prepare_context(diag):
    """Build graph, BFS tree, M* and the initial spine for a canonical diagram."""
    g = build_graph(diag)
    if not is_connected(g):
        raise DisconnectedGraphError("intersection graph is disconnected")
    tree = build_bfs_tree(g, diag)
    marked = mark_shortest_paths(g, tree)
    h = tree.height

    u_star = [0] * (h + 1)
    u_star[0] = 1
    trace = TraceLog(n=g.n, height=h, main_path=tree.main_path, bfs_fallbacks=tree.fallbacks)
    ctx = SpannerContext(
        diag=diag, g=g, tree=tree, marked=marked,
        spine=SpineState(u_star=u_star),
        parent=[0] * (g.n + 1),
        assigned=[False] * (g.n + 1),
        C=defaultdict(set),
        trace=trace,
    )
    ctx.assigned[1] = True
    if h >= 1:
        first = tree.main_path[1]
        if first not in marked.P[1]:
            first = ctx.argmax(sorted(marked.P[1]), 'b')
            logger.debug("main-path vertex %d unmarked, spine starts at %d", tree.main_path[1], first)
        u_star[1] = first
    return ctx


def _rows(ctx, xs, ys):
    """Boolean |xs| x |ys| adjacency block."""
    return ctx.g.matrix[np.ix_(list(xs), list(ys))]


def _window_sets(ctx, i, u_i, u_next):
    others = [x for x in ctx.tree.level_sets[i] if x != u_i]
    far = [x for x in others if not ctx.adj(x, u_i)]
    S = [x for x in far if not ctx.adj(x, u_next)]
    rest = [x for x in far if ctx.adj(x, u_next)]

    S_p, S_pp = [], []
    if S and rest:
        hit = _rows(ctx, rest, S).any(axis=1)
        S_p = [x for x, flag in zip(rest, hit) if flag]
        rest = [x for x, flag in zip(rest, hit) if not flag]
    if S_p and rest:
        hit = _rows(ctx, rest, S_p).any(axis=1)
        S_pp = [x for x, flag in zip(rest, hit) if flag]

    S, S_p, S_pp = frozenset(S), frozenset(S_p), frozenset(S_pp)
    return S, S_p, S_pp, S | S_p | S_pp


def _d_set(ctx, i, S_star, u_next):
    others = sorted(y for y in ctx.marked.P[i + 1] if y != u_next)
    if not S_star:
        return frozenset()
    if not others:
        return frozenset(S_star)
    xs = sorted(S_star)
    hit = _rows(ctx, xs, others).any(axis=1)
    return frozenset(x for x, flag in zip(xs, hit) if not flag)


def compute_s_sets(i, ctx):
    """
    S, S', S'' and S* of level i against the candidates u'_i, u'_{i+1}.

    Returns:
        Tuple (S, S', S'', S*) of frozensets
    """
    spine = ctx.spine
    S, S_p, S_pp, S_star = _window_sets(ctx, i, spine.u_prime, spine.u_prime_next)
    spine.S, spine.S_p, spine.S_pp, spine.S_star = S, S_p, S_pp, S_star
    if ctx.record is not None:
        ctx.record.S, ctx.record.S_p, ctx.record.S_pp, ctx.record.S_star = S, S_p, S_pp, S_star
    return S, S_p, S_pp, S_star


def compute_d_set(i, ctx):
    """D_i: members of S* with no neighbor in P_{i+1} other than u'_{i+1}."""
    D = _d_set(ctx, i, ctx.spine.S_star, ctx.spine.u_prime_next)
    ctx.spine.D = D
    if ctx.record is not None:
        ctx.record.D = D
    return D


def select_spine_candidate(i, ctx):
    """
    Step 10: u'_{i+1} is the main-path vertex u_{i+1} when it is a marked
    neighbor of u'_i, else the max-b neighbor of u'_i inside P_{i+1}.

    The max-d neighbor is kept as spine.alternate_next for the retry.
    """
    u_i = ctx.spine.u_prime
    options = sorted(x for x in ctx.marked.P[i + 1] if ctx.adj(x, u_i))
    if not options:
        raise SpannerError(f"level {i}: spine vertex {u_i} has no marked neighbor at level {i + 1}")
    best_b = ctx.argmax(options, 'b')
    alternate = ctx.argmax(options, 'd')
    path = ctx.tree.main_path
    primary = best_b
    if i + 1 < len(path) and path[i + 1] in options:
        primary = path[i + 1]
        if primary != best_b:
            logger.debug("level %d: main-path vertex %d preferred over max-b %d", i, primary, best_b)
    ctx.spine.u_prime_next = primary
    ctx.spine.alternate_next = alternate
    if ctx.record is not None:
        ctx.record.u_prime = u_i
        ctx.record.candidate_b = best_b
        ctx.record.candidate_d = alternate
    return primary


@dataclass
class _Decision:
    u_i: int
    u_next: int
    branch: str
    selector: str
    maxima: dict
    stranded: tuple = ()


def _cascade(ctx, i, u_i, u_next, S_star, D, selector):
    key = SELECTORS[selector]
    prev = ctx.spine.u_star[i - 1]
    maxima = dict.fromkeys(('max_b', 'max_d', 'max_b_star', 'max_d_star'))
    keep = 'L10' if i == 1 else 'default'

    if not S_star:
        return _Decision(u_i, u_next, keep, selector, maxima)

    xs = sorted(S_star)
    beyond = [y for y in ctx.tree.level_sets[i + 1] if y != u_next]
    for x in xs:
        for y in beyond:
            if ctx.adj(x, y) and not ctx.adj(y, u_next):
                return _Decision(u_i, u_next, 'L7', selector, maxima)

    P_next = sorted(ctx.marked.P[i + 1])
    relays = [y for y in P_next if y != u_next and ctx.adj(y, u_next)]
    escapes = [x for x in xs if x not in D]
    if escapes and any(ctx.adj(x, y) for x in escapes for y in relays):
        eligible = [y for y in relays if ctx.adj(y, u_i)]
        covering = [y for y in eligible if all(ctx.adj(x, y) for x in escapes)]
        maxima['max_b'] = ctx.argmax(covering, 'b') or None
        maxima['max_d'] = ctx.argmax(covering, 'd') or None
        if covering:
            choice, used = ctx.argmax(covering, key), selector
        else:
            partial = [y for y in eligible if any(ctx.adj(x, y) for x in escapes)]
            choice, used = ctx.argmax(partial, 'd'), 'max_d'
        if choice:
            return _Decision(u_i, choice, 'L8', used, maxima)

    if D:
        bridges = [z for z in P_next if z != u_next and ctx.adj(z, u_next)]
        eligible = [
            y for y in sorted(ctx.marked.P[i])
            if y != u_i and y not in D
            and any(ctx.adj(x, y) for x in D)
            and any(ctx.adj(y, z) for z in bridges)
        ]
        maxima['max_b_star'] = ctx.argmax(eligible, 'b') or None
        maxima['max_d_star'] = ctx.argmax(eligible, 'd') or None
        # the new u*_i must stay adjacent to u*_{i-1}
        attached = [y for y in eligible if ctx.adj(y, prev)]
        if attached:
            y = ctx.argmax(attached, key)
            z = ctx.argmax([w for w in P_next if ctx.adj(w, y)], key)
            return _Decision(y, z, 'L9', selector, maxima)

    return _Decision(u_i, u_next, 'default', selector, maxima)


def _reach(ctx, z, anchors, i):
    spots = {j for j, a in anchors if ctx.adj(z, a)}
    if ctx.tree.level[z] == i + 1:
        # z may still hang from u*_{i+2}
        spots.add(i + 2)
    return spots


def _stranded(ctx, i, decision, S_star):
    """
    Members of S* with no stretch-3 escape through the window's spine.

    x escapes when some anchor p in {u*_{i-1}, u*_i, u*_{i+1}} adjacent to x
    leaves every neighbor z of x at levels i and i+1 a possible parent at
    most one spine step from p, so that the tree path x-p..q-z has at most
    three edges.
    """
    anchors = ((i - 1, ctx.spine.u_star[i - 1]), (i, decision.u_i), (i + 1, decision.u_next))
    spine = {a for _, a in anchors}
    out = []
    for x in sorted(S_star):
        if x in spine:
            continue
        ring = [z for z in ctx.g.adjacency[x] if z not in spine and ctx.tree.level[z] in (i, i + 1)]
        reach = {z: _reach(ctx, z, anchors, i) for z in ring}
        parents = [j for j, a in anchors if ctx.adj(x, a)]
        if not any(all(any(abs(j - q) <= 1 for q in reach[z]) for z in ring) for j in parents):
            out.append(x)
    return tuple(out)


def apply_cascade(i, ctx):
    """
    Steps 6 / 12: decide u*_i and u*_{i+1} through the Lemma 7-10 cascade.

    The window is evaluated with the max-b selector first. If that leaves a
    member of S* without a stretch-3 escape through u*_{i-1}, u*_i, u*_{i+1}
    (see _stranded), it is re-evaluated with the max-d candidate and
    selector, and the max-d result is kept only when it strands strictly
    fewer vertices.

    Returns:
        Tuple (u*_i, u*_{i+1}, branch)
    """
    spine = ctx.spine
    decision = _cascade(ctx, i, spine.u_prime, spine.u_prime_next, spine.S_star, spine.D, 'max_b')
    decision.stranded = _stranded(ctx, i, decision, spine.S_star)
    retried = False

    if decision.stranded:
        retried = True
        alt = spine.alternate_next
        sets = _window_sets(ctx, i, spine.u_prime, alt)
        D = _d_set(ctx, i, sets[3], alt)
        second = _cascade(ctx, i, spine.u_prime, alt, sets[3], D, 'max_d')
        second.stranded = _stranded(ctx, i, second, sets[3])
        if len(second.stranded) < len(decision.stranded):
            logger.debug("level %d: max-d retry strands %d instead of %d",
                         i, len(second.stranded), len(decision.stranded))
            decision = second
            spine.u_prime_next = alt
            spine.S, spine.S_p, spine.S_pp, spine.S_star = sets
            spine.D = D
        else:
            logger.debug("level %d: max-d retry rejected", i)
        if decision.stranded:
            logger.info("level %d: S* vertices %s have no stretch-3 escape", i, list(decision.stranded))

    spine.u_star[i] = decision.u_i
    spine.u_star[i + 1] = decision.u_next
    spine.selector = decision.selector
    spine.maxima = decision.maxima
    logger.debug("level %d: branch %s selector %s spine %d -> %d",
                 i, decision.branch, decision.selector, decision.u_i, decision.u_next)

    record = ctx.record
    if record is not None:
        record.branch = decision.branch
        record.selector = decision.selector
        record.retried = retried
        record.stranded = decision.stranded
        record.u_star_i = decision.u_i
        record.u_star_next = decision.u_next
        record.maxima = dict(decision.maxima)
        record.S, record.S_p, record.S_pp, record.S_star = spine.S, spine.S_p, spine.S_pp, spine.S_star
        record.D = spine.D
    return decision.u_i, decision.u_next, decision.branch


def _fallback(ctx, x, reason, record):
    lvl = ctx.tree.level[x]
    lower = [u for u in ctx.g.adjacency[x] if ctx.tree.level[u] == lvl - 1]
    choice = ctx.argmax(lower, 'b')
    ctx.parent[x] = choice
    ctx.assigned[x] = True
    event = f"{x}->{choice} ({reason})"
    if record is not None:
        record.fallbacks.append(event)
    logger.warning("adjacency fallback: vertex %d attached to %d, %s", x, choice, reason)


def _attach(ctx, x, target, key, record):
    """Attach x to target when adjacent; otherwise fall back. True when target was used."""
    if target and ctx.adj(x, target):
        ctx.parent[x] = target
        ctx.assigned[x] = True
        ctx.C[key].add(x)
        if record is not None:
            record.assigned.setdefault(key, set()).add(x)
        return True
    _fallback(ctx, x, f"prescribed parent {target} not adjacent", record)
    return False


def _open(ctx, level):
    spine_vertex = ctx.spine.u_star[level]
    return [x for x in ctx.tree.level_sets[level] if x != spine_vertex and not ctx.assigned[x]]


def assign_parents_level(i, ctx):
    """
    Steps 13-15 for window i.

    Leftovers of L_{i-1} go to u*_i when adjacent, else u*_{i-1}. Vertices of
    L_i adjacent to neither u*_i nor u*_{i+1} go to u*_{i-1} (C_{i,i-1}); the
    remaining L_i vertices adjacent to u*_i and to some C_{i,i-1} member go
    to u*_i (C_{i,i}). Everything else waits for the next window.
    """
    u = ctx.spine.u_star
    prev, cur, nxt = u[i - 1], u[i], u[i + 1]
    record = ctx.record

    for x in _open(ctx, i - 1):
        if ctx.adj(x, cur):
            _attach(ctx, x, cur, (i - 1, i), record)
        else:
            _attach(ctx, x, prev, (i - 1, i - 1), record)

    for x in _open(ctx, i):
        if not ctx.adj(x, cur) and not ctx.adj(x, nxt):
            _attach(ctx, x, prev, (i, i - 1), record)

    far = sorted(ctx.C.get((i, i - 1), ()))
    for y in _open(ctx, i):
        if ctx.adj(y, cur) and any(ctx.adj(y, x) for x in far):
            _attach(ctx, y, cur, (i, i), record)
    return ctx.C


def _spanner_tree(ctx):
    return SpannerTree(
        parent=tuple(ctx.parent),
        C={key: frozenset(members) for key, members in sorted(ctx.C.items()) if members},
    )


def _choose(ctx, x, options, on_spine):
    """First option with the fewest stretch-3 conflicts against placed neighbors of x."""
    level = ctx.tree.level

    def conflicts(p):
        count = 0
        for z in ctx.g.adjacency[x]:
            if z in on_spine:
                count += 1 + abs(level[p] - level[z]) > 3
            elif ctx.assigned[z] and ctx.parent[z] in on_spine:
                count += 2 + abs(level[p] - level[ctx.parent[z]]) > 3
        return count

    return min(options, key=conflicts)


def finalize_last_level(ctx):
    """
    Step 17, per vertex.

    Open x in L_{h-1} prefers u*_h, open y in L_h prefers u*_{h-1}. When both
    spine vertices are adjacent, the one that leaves fewer edges to already
    placed neighbors above stretch 3 wins, ties going to the preferred one.
    The spine links are set last.
    """
    h = ctx.h
    record = LevelRecord(level=h)
    ctx.trace.final = record
    u = ctx.spine.u_star

    if h >= 1:
        top, below = u[h], u[h - 1]
        on_spine = set(u)
        for x in _open(ctx, h - 1):
            options = [p for p in (top, below) if ctx.adj(x, p)]
            if not options:
                _fallback(ctx, x, f"adjacent to neither {top} nor {below}", record)
                continue
            p = _choose(ctx, x, options, on_spine)
            _attach(ctx, x, p, (h - 1, h) if p == top else (h - 1, h - 1), record)
        for y in _open(ctx, h):
            options = [p for p in (below, top) if ctx.adj(y, p)]
            if not options:
                _fallback(ctx, y, f"adjacent to neither {below} nor {top}", record)
                continue
            p = _choose(ctx, y, options, on_spine)
            _attach(ctx, y, p, (h, h - 1) if p == below else (h, h), record)

        for i in range(1, h + 1):
            ctx.parent[u[i]] = u[i - 1]
            ctx.assigned[u[i]] = True

    for v in range(2, ctx.g.n + 1):
        if not ctx.assigned[v]:
            _fallback(ctx, v, "left unassigned", record)

    ctx.trace.spine = tuple(u)
    return _spanner_tree(ctx)


def _lemma_pair(ctx, i):
    path = ctx.tree.main_path
    if i >= len(path):
        return ctx.spine.u_prime, ctx.spine.u_prime_next
    u_i = path[i]
    if i + 1 < len(path):
        return u_i, path[i + 1]
    below = [y for y in ctx.tree.level_sets[i + 1] if ctx.adj(y, u_i)]
    return u_i, ctx.argmax(below, 'b') or ctx.spine.u_prime_next


def check_window_lemmas(i, ctx):
    """
    Evaluate the per-window structural lemmas at the main-path pair u_i, u_{i+1}.

    The lemmas speak about the main path, which the spine may have left after
    an earlier L9 move, so the window sets are recomputed for that pair.

    Returns:
        List of finding strings (empty when every lemma holds)
    """
    u_i, u_next = _lemma_pair(ctx, i)
    S, S_p, S_pp, S_star = _window_sets(ctx, i, u_i, u_next)
    D = _d_set(ctx, i, S_star, u_next)
    below = [y for y in ctx.tree.level_sets[i + 1] if y != u_next]
    findings = []

    for x in ctx.tree.level_sets[i]:
        if x == u_i or ctx.adj(x, u_i):
            continue
        for y in below:
            if ctx.adj(x, y) and not ctx.adj(y, u_i):
                findings.append(f"lemma3 level {i}: {x}~{y} but {y} not adjacent to u'_{i}={u_i}")

    relays = S_p | S_pp
    for x in sorted(S):
        for z in below:
            if not ctx.adj(x, z):
                continue
            for y in sorted(relays):
                if not ctx.adj(y, z):
                    findings.append(f"lemma4 level {i}: {x}~{z} but {y} not adjacent to {z}")

    for x in sorted(relays):
        for y in below:
            if not ctx.adj(y, u_next) and not ctx.adj(x, y):
                findings.append(f"lemma5 level {i}: {x} not adjacent to {y}")

    for x in sorted(S_star - D):
        if any(ctx.adj(x, z) for z in D):
            continue
        if not any(ctx.adj(x, y) for y in ctx.tree.level_sets[i + 1]):
            findings.append(f"lemma6 level {i}: {x} has no neighbor at level {i + 1}")

    for item in findings:
        logger.warning("finding: %s", item)
    if ctx.record is not None:
        ctx.record.findings.extend(findings)
    return findings


def build_tree3spanner(diag):
    """
    Algorithm TR3SPT end to end.

    A finished tree that stretches past 3 goes through repair_tree.

    Args:
        diag: valid Diagram with a connected intersection graph (any order)

    Returns:
        Tuple (SpannerTree, TraceLog) in canonical vertex indexing
    """
    problems = validate(diag)
    if problems:
        raise DiagramError('; '.join(str(p) for p in problems))
    canonical, _ = canonicalize(diag)
    ctx = prepare_context(canonical)

    for i in range(1, ctx.h):
        ctx.record = LevelRecord(level=i)
        ctx.spine.u_prime = ctx.spine.u_star[i]
        select_spine_candidate(i, ctx)
        compute_s_sets(i, ctx)
        compute_d_set(i, ctx)
        check_window_lemmas(i, ctx)
        apply_cascade(i, ctx)
        assign_parents_level(i, ctx)
        ctx.trace.records.append(ctx.record)
    ctx.record = None

    tree = finalize_last_level(ctx)
    try:
        check_spanning_tree(ctx.g, tree)
        report = max_edge_stretch(ctx.g, tree)
        if not report.ok:
            tree = repair_tree(ctx, tree, report.max_stretch)
            check_spanning_tree(ctx.g, tree)
    except NotSpanningTreeError as e:
        raise SpannerError(f"construction produced an invalid tree: {e}")
    return tree, ctx.trace


def repair_tree(ctx, tree, stretch):
    """
    Replace a cascade tree whose stretch exceeds 3.

    First a spine search with a 2-SAT leaf assignment, trying the cascade
    spine and the main path before anything else; then, for n up to the
    exhaustive limit, the best spanning tree. A replacement is kept only when
    it stretches less than the cascade tree.

    Returns:
        The tree to report; ctx.trace.repair says what happened
    """
    g, trace = ctx.g, ctx.trace
    preferred = (tuple(ctx.spine.u_star), main_path_spine(g, ctx.tree, ctx.diag))
    found = search_spine(g, ctx.tree, ctx.marked, ctx.diag, preferred=preferred)
    if found is not None:
        spine, index = found
        C = defaultdict(set)
        for v, j in index.items():
            C[(ctx.tree.level[v], j)].add(v)
        candidate = SpannerTree(
            parent=tuple(caterpillar_parents(g.n, spine, index)),
            C={key: frozenset(members) for key, members in sorted(C.items())},
        )
        moved = [v for v in sorted(index) if candidate.parent[v] != tree.parent[v]]
        if max_edge_stretch(g, candidate).max_stretch < stretch:
            logger.info("cascade tree stretched %d, rebuilt on spine %s", stretch, list(spine))
            trace.spine = spine
            trace.repair = (f"spine {_fmt(spine, sort=False)} moved "
                            + _fmt_text([f"{v}->{candidate.parent[v]}" for v in moved]))
            return candidate

    if g.n <= EXHAUSTIVE_LIMIT:
        optimum, edges = exhaustive_best_tree(g)
        if optimum < stretch:
            logger.info("cascade tree stretched %d, replaced by an exhaustive optimum %d", stretch, optimum)
            trace.repair = f"exhaustive optimum {optimum}"
            return SpannerTree(parent=tuple(parents_from_edges(g.n, edges)))

    logger.warning("cascade tree stretches %d and no repair was found", stretch)
    trace.repair = 'unresolved'
    return tree


def parse_tree(text, n=None):
    """
    Parse the tree-file format: n, then n parent entries with 0 for the root.

    Args:
        text: file content
        n: expected vertex count, if known

    Returns:
        SpannerTree without C sets
    """
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith('#')]
    if not lines:
        raise TreeFileError("line 1: missing vertex count")
    try:
        count = int(lines[0])
    except ValueError:
        raise TreeFileError(f"line 1: vertex count {lines[0]!r} is not an integer")
    if n is not None and count != n:
        raise TreeFileError(f"tree has {count} vertices, diagram has {n}")
    fields = lines[1].split() if len(lines) > 1 else []
    if len(fields) != count:
        raise TreeFileError(f"line 2: expected {count} parent entries, found {len(fields)}")
    try:
        parents = [int(f) for f in fields]
    except ValueError:
        raise TreeFileError("line 2: non-integer parent entry")
    if any(p < 0 or p > count for p in parents):
        raise TreeFileError(f"line 2: parent entries must lie in 0..{count}")
    return SpannerTree(parent=tuple([0] + parents))
