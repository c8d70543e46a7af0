import sys
import logging
import argparse
from dataclasses import dataclass

from diagram import MODES, DiagramError, GenerationError, generate_random, parse_diagram, serialize, canonicalize
from graph import DisconnectedGraphError, build_graph
from spanner import SpannerError, TreeFileError, build_tree3spanner, parse_tree
from verify import (
    DEFAULT_THRESHOLD,
    InstanceTooLargeError,
    NotSpanningTreeError,
    check_spanning_tree,
    exhaustive_best_tree_stretch,
    max_edge_stretch,
)
from utils import graph_to_dot, read_text, write_text

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DISCONNECTED = 3
EXIT_NOT_SPANNING = 4
EXIT_TOO_LARGE = 5

EXIT_CODES = (
    (DiagramError, EXIT_USAGE),
    (TreeFileError, EXIT_USAGE),
    (GenerationError, EXIT_DISCONNECTED),
    (DisconnectedGraphError, EXIT_DISCONNECTED),
    (NotSpanningTreeError, EXIT_NOT_SPANNING),
    (InstanceTooLargeError, EXIT_TOO_LARGE),
    (SpannerError, EXIT_FAILURE),
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = None
    tree: str = None
    output: str = None
    n: int = 0
    seed: int = 0
    mode: str = 'general'
    threshold: int = DEFAULT_THRESHOLD
    trace: bool = False
    sizes: tuple = ()
    count: int = 0
    verbose: bool = False


def status(message):
    print(message, file=sys.stderr)


def exit_code_for(error):
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    return EXIT_FAILURE


def load_diagram(path):
    """Parse and canonicalize a diagram file."""
    diag, _ = canonicalize(parse_diagram(read_text(path)))
    return diag


def cmd_gen(config):
    status(f"[1/1] Generating {config.mode} diagram (n={config.n}, seed={config.seed})...")
    diag = generate_random(config.n, config.seed, config.mode)
    write_text(serialize(diag), config.output)
    status(f"✓ Wrote {diag.n} trapezoids")
    return EXIT_OK


def cmd_build(config):
    status("[1/2] Parsing diagram...")
    diag = load_diagram(config.input)
    status(f"✓ Parsed {diag.n} trapezoids")

    status("[2/2] Building tree 3-spanner...")
    tree, trace = build_tree3spanner(diag)
    write_text(tree.to_text(), config.output)
    if config.trace and config.output:
        write_text(trace.to_text(), f"{config.output}.trace.txt")
    elif config.trace:
        # stdout carries the tree file only
        sys.stderr.write(trace.to_text())
    fallbacks = trace.fallbacks()
    status(f"✓ Tree with {len(tree.edges())} edges, {len(trace.records)} windows, {len(fallbacks)} fallbacks")
    return EXIT_OK


def cmd_verify(config):
    status("[1/3] Parsing diagram and tree...")
    diag = load_diagram(config.input)
    tree = parse_tree(read_text(config.tree), n=diag.n)
    g = build_graph(diag)

    status("[2/3] Checking spanning tree...")
    check_spanning_tree(g, tree)
    status("✓ Spanning tree")

    status(f"[3/3] Measuring edge stretch (t={config.threshold})...")
    report = max_edge_stretch(g, tree, config.threshold)
    write_text(report.to_text() + '\n', config.output)
    if report.ok:
        status(f"✓ Max stretch {report.max_stretch}")
        return EXIT_OK
    status(f"✗ {len(report.violations)} edges exceed stretch {config.threshold}")
    return EXIT_FAILURE


def cmd_oracle(config):
    status("[1/2] Parsing diagram...")
    g = build_graph(load_diagram(config.input))
    status(f"[2/2] Enumerating spanning trees (n={g.n}, m={g.m})...")
    best = exhaustive_best_tree_stretch(g)
    write_text(f"{best}\n", config.output)
    status(f"✓ Best achievable stretch {best}")
    return EXIT_OK


def cmd_dot(config):
    diag = load_diagram(config.input)
    g = build_graph(diag)
    tree = parse_tree(read_text(config.tree), n=diag.n) if config.tree else None
    write_text(graph_to_dot(g, tree), config.output)
    return EXIT_OK


def cmd_bench(config):
    from bench import format_table, ratio_within, run_benchmark

    status(f"[1/1] Benchmarking sizes {list(config.sizes)}...")
    rows = run_benchmark(config.sizes, config.seed, mode=config.mode)
    write_text(format_table(rows), config.output)
    if len(rows) > 1:
        mark = '✓' if ratio_within(rows) else '✗'
        status(f"{mark} Build-time ratios {[round(r.ratio, 2) for r in rows[1:]]}")
    return EXIT_OK


def cmd_corpus(config):
    from corpus import run_acceptance

    output_dir = config.output or 'results'
    status(f"[1/1] Running acceptance corpus ({config.count} instances, seed={config.seed})...")
    report = run_acceptance(config.count, seed=config.seed, output_dir=output_dir)
    for line in report.summary_lines():
        status(f"  {line}")
    mark = '✓' if report.sound else '✗'
    status(f"{mark} Report written to {output_dir}")
    return EXIT_OK if report.sound else EXIT_FAILURE


COMMANDS = {
    'gen': cmd_gen,
    'build': cmd_build,
    'verify': cmd_verify,
    'oracle': cmd_oracle,
    'dot': cmd_dot,
    'bench': cmd_bench,
    'corpus': cmd_corpus,
}


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def size_list(text):
    sizes = tuple(positive_int(part) for part in text.split(',') if part.strip())
    if not sizes:
        raise argparse.ArgumentTypeError("size list is empty")
    if list(sizes) != sorted(sizes):
        raise argparse.ArgumentTypeError("sizes must be ascending")
    return sizes


def build_parser():
    parser = argparse.ArgumentParser(
        description='Tree 3-spanners of trapezoid graphs'
    )
    parser.add_argument('--verbose', action='store_true',
                        help='Log branch decisions and findings at DEBUG level')
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='Generate a random connected diagram')
    gen.add_argument('--n', type=positive_int, required=True, help='Number of trapezoids')
    gen.add_argument('--seed', type=int, default=0, help='Random seed')
    gen.add_argument('--mode', choices=MODES, default='general', help='Diagram family')
    gen.add_argument('-o', '--output', help='Output diagram file (default: stdout)')

    build = sub.add_parser('build', help='Build the tree 3-spanner of a diagram')
    build.add_argument('-i', '--input', required=True, help='Diagram file')
    build.add_argument('-o', '--output', help='Output tree file (default: stdout)')
    build.add_argument('--trace', action='store_true',
                       help='Also write the per-level trace (next to -o, else to stderr)')

    verify = sub.add_parser('verify', help='Report the edge stretch of a tree')
    verify.add_argument('-i', '--input', required=True, help='Diagram file')
    verify.add_argument('-t', '--tree', required=True, help='Tree file')
    verify.add_argument('--threshold', type=positive_int, default=DEFAULT_THRESHOLD,
                        help='Stretch threshold')
    verify.add_argument('-o', '--output', help='Report file (default: stdout)')

    oracle = sub.add_parser('oracle', help='Best achievable stretch by exhaustive search')
    oracle.add_argument('-i', '--input', required=True, help='Diagram file (n <= 9)')
    oracle.add_argument('-o', '--output', help='Output file (default: stdout)')

    dot = sub.add_parser('dot', help='Export the intersection graph as DOT')
    dot.add_argument('-i', '--input', required=True, help='Diagram file')
    dot.add_argument('-t', '--tree', help='Tree file whose edges are drawn bold')
    dot.add_argument('-o', '--output', help='Output DOT file (default: stdout)')

    bench = sub.add_parser('bench', help='Time generate/build/verify per size')
    bench.add_argument('--sizes', type=size_list, required=True, help='Comma-separated ascending sizes')
    bench.add_argument('--seed', type=int, default=0, help='Base seed')
    bench.add_argument('--mode', choices=MODES, default='general', help='Diagram family')
    bench.add_argument('-o', '--output', help='Output table file (default: stdout)')

    corpus = sub.add_parser('corpus', help='Run the acceptance corpus')
    corpus.add_argument('--count', type=positive_int, default=1000, help='Number of instances')
    corpus.add_argument('--seed', type=int, default=0, help='Schedule seed')
    corpus.add_argument('-o', '--output', help='Output directory (default: results)')
    return parser


def parse_config(argv=None):
    args = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def main(argv=None):
    config = parse_config(argv)
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        return COMMANDS[config.command](config)
    except Exception as e:
        status(f"✗ Error in {config.command}: {e}")
        return exit_code_for(e)


if __name__ == '__main__':
    sys.exit(main())
