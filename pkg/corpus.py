import os
import time
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from bfstree import build_bfs_tree, check_internal_node_lemmas, internal_node_count_per_level
from diagram import MODES, Diagram, canonicalize, generate_random, serialize
from graph import build_graph, is_connected
from maspt import mark_shortest_paths, verify_marked_semantics
from spanner import SpannerError, build_tree3spanner
from verify import (
    DEFAULT_THRESHOLD,
    all_pairs_stretch_check,
    exhaustive_best_tree_stretch,
    max_edge_stretch,
)
from utils import ensure_output_dir, save_json, write_text

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 40
TINY_LIMIT = 8
HARD_LEMMAS = ('lemma3', 'lemma4', 'lemma5')


@dataclass
class InstanceResult:
    n: int
    m: int
    h: int
    spanning: bool
    max_stretch: int = None
    oracle_agree: bool = None
    optimum: int = None
    bfs_fallbacks: int = 0
    max_internal: int = 0
    lemma1: list = field(default_factory=list)
    lemma2: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)
    adjacency_fallbacks: int = 0

    @property
    def hard_violations(self):
        count = len(self.lemma1) + len(self.lemma2.get('2a', [])) + len(self.lemma2.get('2c', []))
        return count + sum(1 for f in self.findings if f.startswith(HARD_LEMMAS))

    def stretch_ok(self, t=DEFAULT_THRESHOLD):
        return self.spanning and self.max_stretch is not None and self.max_stretch <= t


def corpus_schedule(count, n_min=10, n_max=200, modes=MODES, seed=0):
    """
    Deterministic list of (n, seed, mode) triples.

    Sizes are uniform in [n_min, n_max]; modes cycle in the given order.
    """
    rng = np.random.default_rng(seed)
    sizes = rng.integers(n_min, n_max + 1, size=count)
    seeds = rng.integers(0, 2 ** 31 - 1, size=count)
    return [(int(sizes[k]), int(seeds[k]), modes[k % len(modes)]) for k in range(count)]


def evaluate_instance(diag, exhaustive=False):
    """
    Build and check one instance.

    Args:
        diag: valid diagram with a connected intersection graph
        exhaustive: also run the spanning-tree oracle when n <= TINY_LIMIT

    Returns:
        InstanceResult
    """
    canonical, _ = canonicalize(diag)
    g = build_graph(canonical)
    bfs = build_bfs_tree(g, canonical)
    marked = mark_shortest_paths(g, bfs)
    _, lemma1 = verify_marked_semantics(g, bfs, marked)
    lemma2 = check_internal_node_lemmas(bfs, g, canonical)
    counts = internal_node_count_per_level(bfs, g)

    result = InstanceResult(
        n=g.n, m=g.m, h=bfs.height, spanning=False,
        bfs_fallbacks=bfs.fallbacks,
        max_internal=max(counts, default=0),
        lemma1=lemma1,
        lemma2={k: list(v) for k, v in lemma2.items()},
    )
    try:
        tree, trace = build_tree3spanner(canonical)
    except SpannerError as e:
        logger.warning("construction failed on n=%d: %s", g.n, e)
        return result

    result.spanning = True
    result.findings = trace.findings()
    result.adjacency_fallbacks = len(trace.fallbacks())
    result.max_stretch = max_edge_stretch(g, tree).max_stretch
    if g.n <= ORACLE_LIMIT:
        result.oracle_agree = all(
            max_edge_stretch(g, tree, t).ok == all_pairs_stretch_check(g, tree, t)
            for t in (1, 2, 3)
        )
    if exhaustive and g.n <= TINY_LIMIT:
        result.optimum = exhaustive_best_tree_stretch(g)
    return result


def _tree_stretch(diag):
    canonical, _ = canonicalize(diag)
    tree, _ = build_tree3spanner(canonical)
    return max_edge_stretch(build_graph(canonical), tree).max_stretch


def shrink_counterexample(diag, still_fails):
    """
    Delete trapezoids in chunks while the failure persists.

    Chunks start at half the diagram and halve whenever no chunk of the
    current size can go; the last pass removes single trapezoids.

    Args:
        diag: failing diagram
        still_fails: predicate on a canonical Diagram

    Returns:
        Canonical Diagram from which no single deletion keeps the graph
        connected and the failure alive
    """
    current, _ = canonicalize(diag)
    chunk = max(current.n // 2, 1)
    while current.n > 1:
        removed = False
        k = 0
        while k < current.n and current.n > chunk:
            kept = current.trapezoids[:k] + current.trapezoids[k + chunk:]
            smaller, _ = canonicalize(Diagram(kept))
            if is_connected(build_graph(smaller)) and still_fails(smaller):
                current = smaller
                removed = True
            else:
                k += chunk
        if not removed:
            if chunk == 1:
                break
            chunk = max(chunk // 2, 1)
    logger.debug("shrunk counterexample to n=%d", current.n)
    return current


@dataclass
class AcceptanceReport:
    total: int = 0
    spanning_ok: int = 0
    stretch_ok: int = 0
    oracle_checked: int = 0
    oracle_agree: int = 0
    subclass_total: int = 0
    subclass_ok: int = 0
    tiny_total: int = 0
    tiny_ok: int = 0
    hard_lemma_violations: int = 0
    lemma2b_ok: int = 0
    bfs_fallback_free: int = 0
    lemma6_findings: int = 0
    adjacency_fallbacks: int = 0
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def sound(self):
        return (
            self.spanning_ok == self.total
            and self.oracle_agree == self.oracle_checked
            and self.subclass_ok == self.subclass_total
            and self.tiny_ok == self.tiny_total
            and self.hard_lemma_violations == 0
        )

    def to_dict(self):
        out = asdict(self)
        out['sound'] = self.sound
        return out

    def summary_lines(self):
        def rate(ok, total):
            return f"{ok}/{total}" + (f" ({100.0 * ok / total:.1f}%)" if total else '')

        return [
            f"spanning trees: {rate(self.spanning_ok, self.total)}",
            f"stretch <= 3: {rate(self.stretch_ok, self.total)}",
            f"edge/all-pairs agreement: {rate(self.oracle_agree, self.oracle_checked)}",
            f"interval/permutation stretch <= 3: {rate(self.subclass_ok, self.subclass_total)}",
            f"tiny exhaustive: {rate(self.tiny_ok, self.tiny_total)}",
            f"hard lemma violations: {self.hard_lemma_violations}",
            f"<= 2 internal nodes per level: {rate(self.lemma2b_ok, self.total)}",
            f"BFS rule without fallback: {rate(self.bfs_fallback_free, self.total)}",
            f"lemma 6 findings: {self.lemma6_findings}, adjacency fallbacks: {self.adjacency_fallbacks}",
            f"counterexamples: {len(self.counterexamples)}, elapsed {self.elapsed:.1f}s",
        ]


def _write_counterexample(diag, k, output_dir):
    shrunk = shrink_counterexample(diag, lambda d: _tree_stretch(d) > DEFAULT_THRESHOLD)
    _, trace = build_tree3spanner(shrunk)
    path = os.path.join(output_dir, f"counterexample_{k}.txt")
    write_text(serialize(shrunk), path)
    write_text(trace.to_text(), os.path.join(output_dir, f"counterexample_{k}.trace.txt"))
    logger.warning("stretch counterexample shrunk to n=%d: %s", shrunk.n, path)
    return path


def run_acceptance(count, seed=0, output_dir=None, n_min=10, n_max=200,
                   subclass_count=200, subclass_max=150, tiny_count=200):
    """
    Run the acceptance corpus and collect pass rates.

    Args:
        count: instances in the main mixed-mode corpus
        seed: schedule seed
        output_dir: where acceptance.json and counterexamples go (None: nothing written)
        n_min, n_max: main corpus size range
        subclass_count: interval-mode and permutation-mode instances each
        subclass_max: largest subclass instance
        tiny_count: instances with n <= 8 checked against the exhaustive oracle

    Returns:
        AcceptanceReport
    """
    start = time.perf_counter()
    report = AcceptanceReport()
    if output_dir:
        ensure_output_dir(output_dir)

    for n, instance_seed, mode in corpus_schedule(count, n_min, n_max, MODES, seed):
        diag = generate_random(n, instance_seed, mode)
        result = evaluate_instance(diag)
        report.total += 1
        report.spanning_ok += result.spanning
        report.hard_lemma_violations += result.hard_violations
        report.lemma2b_ok += result.max_internal <= 2
        report.bfs_fallback_free += result.bfs_fallbacks == 0
        report.lemma6_findings += sum(1 for f in result.findings if f.startswith('lemma6'))
        report.adjacency_fallbacks += result.adjacency_fallbacks
        if result.oracle_agree is not None:
            report.oracle_checked += 1
            report.oracle_agree += result.oracle_agree
        if result.stretch_ok():
            report.stretch_ok += 1
        elif result.spanning and output_dir:
            k = len(report.counterexamples) + 1
            report.counterexamples.append(_write_counterexample(diag, k, output_dir))

    for mode in ('interval', 'permutation'):
        for n, instance_seed, _ in corpus_schedule(subclass_count, 2, subclass_max, (mode,), seed + 1):
            result = evaluate_instance(generate_random(n, instance_seed, mode))
            report.subclass_total += 1
            report.subclass_ok += result.stretch_ok()

    for n, instance_seed, mode in corpus_schedule(tiny_count, 1, TINY_LIMIT, MODES, seed + 2):
        result = evaluate_instance(generate_random(n, instance_seed, mode), exhaustive=True)
        report.tiny_total += 1
        if result.optimum is not None and result.optimum <= result.max_stretch <= DEFAULT_THRESHOLD:
            report.tiny_ok += 1

    report.elapsed = time.perf_counter() - start
    if output_dir:
        save_json(report.to_dict(), os.path.join(output_dir, 'acceptance.json'))
    return report
