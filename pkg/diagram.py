import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

MODES = ('general', 'interval', 'permutation')
MAX_GENERATION_ATTEMPTS = 100


class DiagramError(ValueError):
    """Raised for malformed or invalid diagram input."""


class GenerationError(RuntimeError):
    """Raised when the random generator cannot produce a connected diagram."""


@dataclass(frozen=True)
class Trapezoid:
    """Four corner points: [a, b] on the top line, [c, d] on the bottom line."""
    a: int
    b: int
    c: int
    d: int

    def corners(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class Diagram:
    """Ordered collection of trapezoids; vertex v is trapezoids[v - 1]."""
    trapezoids: tuple

    @property
    def n(self):
        return len(self.trapezoids)

    def __getitem__(self, v):
        return self.trapezoids[v - 1]

    def coordinates(self):
        """
        Corner coordinates as 1-indexed numpy arrays.

        Returns:
            Tuple (a, b, c, d) of int64 arrays of length n + 1; slot 0 is unused.
        """
        table = np.zeros((self.n + 1, 4), dtype=np.int64)
        for v, trap in enumerate(self.trapezoids, start=1):
            table[v] = trap.corners()
        return table[:, 0], table[:, 1], table[:, 2], table[:, 3]


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    detail: str

    def __str__(self):
        return f"{self.kind} at {list(self.indices)}: {self.detail}"


def parse_diagram(text):
    """
    Parse diagram-file content.

    Args:
        text: first line n, then n lines "a b c d"; lines starting with '#' are ignored

    Returns:
        Diagram in file order (not canonicalized)
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        rows.append((lineno, line.split()))

    if not rows:
        raise DiagramError("line 1: missing vertex count")

    count_line, fields = rows[0]
    if len(fields) != 1:
        raise DiagramError(f"line {count_line}: expected a single vertex count, found {len(fields)} fields")
    try:
        n = int(fields[0])
    except ValueError:
        raise DiagramError(f"line {count_line}: vertex count {fields[0]!r} is not an integer")
    if n < 1:
        raise DiagramError(f"line {count_line}: vertex count must be positive, got {n}")

    trapezoids = []
    for lineno, fields in rows[1:]:
        if len(fields) != 4:
            raise DiagramError(f"line {lineno}: expected 4 coordinates, found {len(fields)}")
        try:
            a, b, c, d = (int(f) for f in fields)
        except ValueError:
            raise DiagramError(f"line {lineno}: non-integer coordinate in {' '.join(fields)!r}")
        trapezoids.append(Trapezoid(a, b, c, d))

    if len(trapezoids) != n:
        last_line = rows[-1][0]
        raise DiagramError(f"line {last_line}: expected {n} trapezoids, found {len(trapezoids)}")

    return Diagram(tuple(trapezoids))


def serialize(diag):
    """Render a diagram in the interchange file format."""
    lines = [str(diag.n)]
    lines.extend(' '.join(str(x) for x in trap.corners()) for trap in diag.trapezoids)
    return '\n'.join(lines) + '\n'


def validate(diag, strict=False):
    """
    Check corner order and endpoint distinctness.

    Degenerate a == b or c == d is accepted (permutation and interval
    subclasses) unless strict is set, which asks for a < b and c < d as in
    general diagrams; endpoints shared between different trapezoids are
    never accepted.

    Returns:
        List of Violation; empty means valid
    """
    report = []
    for v, trap in enumerate(diag.trapezoids, start=1):
        if trap.a > trap.b:
            report.append(Violation('a>b', (v,), f"a={trap.a} exceeds b={trap.b}"))
        if trap.c > trap.d:
            report.append(Violation('c>d', (v,), f"c={trap.c} exceeds d={trap.d}"))
        if strict and trap.a == trap.b:
            report.append(Violation('a>=b', (v,), f"a=b={trap.a} is degenerate"))
        if strict and trap.c == trap.d:
            report.append(Violation('c>=d', (v,), f"c=d={trap.c} is degenerate"))

    for line, (lo, hi) in (('top', ('a', 'b')), ('bottom', ('c', 'd'))):
        owners = {}
        for v, trap in enumerate(diag.trapezoids, start=1):
            for value in {getattr(trap, lo), getattr(trap, hi)}:
                owners.setdefault(value, []).append(v)
        for value in sorted(owners):
            if len(owners[value]) > 1:
                report.append(Violation(
                    f'duplicate-{line}-endpoint',
                    tuple(owners[value]),
                    f"coordinate {value} shared on the {line} line",
                ))
    return report


def _rank(values):
    ordered = np.unique(values)
    return np.searchsorted(ordered, values) + 1


def canonicalize(diag):
    """
    Sort trapezoids by b and rank-compress each line to 1..2n.

    Returns:
        Tuple (canonical Diagram, permutation) where permutation[old - 1] is the
        canonical index of input trapezoid old
    """
    problems = validate(diag)
    if problems:
        raise DiagramError('; '.join(str(p) for p in problems))

    a, b, c, d = (arr[1:] for arr in diag.coordinates())
    order = np.argsort(b, kind='stable')

    top = _rank(np.concatenate([a, b]))
    bottom = _rank(np.concatenate([c, d]))
    n = diag.n
    ra, rb = top[:n], top[n:]
    rc, rd = bottom[:n], bottom[n:]

    trapezoids = tuple(
        Trapezoid(int(ra[k]), int(rb[k]), int(rc[k]), int(rd[k])) for k in order
    )
    permutation = [0] * n
    for new_index, old in enumerate(order, start=1):
        permutation[old] = new_index
    return Diagram(trapezoids), tuple(permutation)


def _random_intervals(rng, n):
    # shuffle 1..2n and pair consecutive values
    points = rng.permutation(2 * n) + 1
    pairs = points.reshape(n, 2)
    return np.sort(pairs, axis=1)


def _draw(rng, n, mode):
    if mode == 'general':
        top = _random_intervals(rng, n)
        bottom = _random_intervals(rng, n)[rng.permutation(n)]
        rows = np.hstack([top, bottom])
    elif mode == 'interval':
        top = _random_intervals(rng, n)
        rows = np.hstack([top, top])
    elif mode == 'permutation':
        ident = np.arange(1, n + 1)
        pi = rng.permutation(n) + 1
        rows = np.column_stack([ident, ident, pi, pi])
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return Diagram(tuple(Trapezoid(*(int(x) for x in row)) for row in rows))


def generate_random(n, seed, mode='general'):
    """
    Draw a random connected canonical diagram.

    Args:
        n: vertex count (>= 1)
        seed: integer seed, reduced modulo 2**64
        mode: 'general', 'interval' or 'permutation'

    Returns:
        Canonical Diagram whose intersection graph is connected
    """
    from graph import build_graph, is_connected

    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")

    seed = seed % 2 ** 64
    for attempt in range(MAX_GENERATION_ATTEMPTS):
        rng = np.random.default_rng([seed, attempt])
        diag, _ = canonicalize(_draw(rng, n, mode))
        if is_connected(build_graph(diag)):
            if attempt:
                logger.debug("n=%d seed=%d mode=%s connected after %d redraws", n, seed, mode, attempt)
            return diag

    raise GenerationError(
        f"no connected {mode} diagram with n={n} after {MAX_GENERATION_ATTEMPTS} attempts (seed={seed})"
    )
