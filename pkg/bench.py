import time
import logging
from dataclasses import dataclass

import numpy as np

from diagram import generate_random
from graph import build_graph
from spanner import build_tree3spanner
from verify import max_edge_stretch

logger = logging.getLogger(__name__)

BENCH_REPEATS = 3


@dataclass(frozen=True)
class BenchRow:
    n: int
    generate: float
    build: float
    verify: float
    max_stretch: int
    ratio: float = float('nan')


def _timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def run_benchmark(sizes, seed, repeats=BENCH_REPEATS, mode='general'):
    """
    Median wall time per phase for each size.

    Args:
        sizes: ascending vertex counts
        seed: base seed; repeat r of every size uses seed + r
        repeats: runs per size
        mode: diagram family passed to the generator

    Returns:
        List of BenchRow; ratio is build time over the previous row's
    """
    rows = []
    for n in sizes:
        gen_t, build_t, verify_t = [], [], []
        worst = 0
        for r in range(repeats):
            diag, t_gen = _timed(generate_random, n, seed + r, mode)
            (tree, _), t_build = _timed(build_tree3spanner, diag)
            report, t_verify = _timed(lambda: max_edge_stretch(build_graph(diag), tree))
            gen_t.append(t_gen)
            build_t.append(t_build)
            verify_t.append(t_verify)
            worst = max(worst, report.max_stretch)

        build_median = float(np.median(build_t))
        ratio = build_median / rows[-1].build if rows and rows[-1].build > 0 else float('nan')
        row = BenchRow(
            n=n,
            generate=float(np.median(gen_t)),
            build=build_median,
            verify=float(np.median(verify_t)),
            max_stretch=worst,
            ratio=ratio,
        )
        logger.debug("bench %s", row)
        rows.append(row)
    return rows


def ratio_within(rows, low=2.5, high=6.0):
    """True when every consecutive build-time ratio lies in [low, high]."""
    return all(low <= row.ratio <= high for row in rows[1:])


def format_table(rows):
    lines = [f"{'n':>6} {'gen_s':>9} {'build_s':>9} {'verify_s':>9} {'ratio':>6} {'stretch':>7}"]
    for row in rows:
        ratio = '-' if np.isnan(row.ratio) else f"{row.ratio:.2f}"
        lines.append(
            f"{row.n:>6} {row.generate:>9.4f} {row.build:>9.4f} {row.verify:>9.4f} {ratio:>6} {row.max_stretch:>7}"
        )
    return '\n'.join(lines) + '\n'
