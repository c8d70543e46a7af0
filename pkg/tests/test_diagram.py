import pytest

import diagram
from diagram import (
    Diagram,
    DiagramError,
    GenerationError,
    Trapezoid,
    canonicalize,
    generate_random,
    parse_diagram,
    serialize,
    validate,
)
from graph import build_graph, is_connected


def test_parse_d5(d5):
    assert d5.n == 5
    assert d5[1] == Trapezoid(1, 4, 2, 5)
    assert d5[5].corners() == (8, 10, 7, 10)


def test_parse_skips_comments_and_blank_lines():
    diag = parse_diagram("# header\n\n1\n# trapezoid\n1 2 1 2\n")
    assert diag.trapezoids == (Trapezoid(1, 2, 1, 2),)


@pytest.mark.parametrize('text, message', [
    ("", "line 1: missing vertex count"),
    ("x\n", "line 1: vertex count 'x' is not an integer"),
    ("0\n", "line 1: vertex count must be positive"),
    ("1\n1 2 3\n", "line 2: expected 4 coordinates, found 3"),
    ("1\n1 2 a 4\n", "line 2: non-integer coordinate"),
    ("2\n1 2 3 4\n", "line 2: expected 2 trapezoids, found 1"),
])
def test_parse_errors_carry_line_numbers(text, message):
    with pytest.raises(DiagramError, match=message):
        parse_diagram(text)


def test_serialize_matches_file_format(d5):
    from conftest import D5_TEXT
    assert serialize(d5) == D5_TEXT
    assert parse_diagram(serialize(d5)) == d5


def test_validate_accepts_d5_and_degenerate_trapezoids(d5, c4):
    assert validate(d5) == []
    assert validate(c4) == []


def test_validate_reports_inverted_corners():
    report = validate(Diagram((Trapezoid(5, 2, 1, 3), Trapezoid(6, 7, 5, 4))))
    kinds = [(v.kind, v.indices) for v in report]
    assert ('a>b', (1,)) in kinds
    assert ('c>d', (2,)) in kinds


def test_strict_validate_rejects_degenerate_trapezoids(d5, c4):
    assert validate(d5, strict=True) == []
    report = validate(c4, strict=True)
    assert [(v.kind, v.indices) for v in report[:2]] == [('a>=b', (1,)), ('c>=d', (1,))]
    assert len(report) == 8


def test_validate_reports_shared_endpoint():
    report = validate(parse_diagram("2\n1 3 1 3\n3 4 2 4\n"))
    assert len(report) == 1
    assert report[0].kind == 'duplicate-top-endpoint'
    assert report[0].indices == (1, 2)


def test_canonicalize_rank_compresses_each_line():
    canonical, permutation = canonicalize(parse_diagram("2\n10 40 20 50\n30 60 10 30\n"))
    assert canonical.trapezoids == (Trapezoid(1, 3, 2, 4), Trapezoid(2, 4, 1, 3))
    assert permutation == (1, 2)


def test_canonicalize_sorts_by_b():
    canonical, permutation = canonicalize(parse_diagram("2\n5 9 1 2\n1 4 3 6\n"))
    assert canonical.trapezoids == (Trapezoid(1, 2, 3, 4), Trapezoid(3, 4, 1, 2))
    assert permutation == (2, 1)


def test_canonicalize_is_idempotent(d5):
    once, _ = canonicalize(d5)
    twice, permutation = canonicalize(once)
    assert once == d5
    assert twice == once
    assert permutation == (1, 2, 3, 4, 5)


def test_canonicalize_rejects_invalid_diagram():
    with pytest.raises(DiagramError, match='duplicate-top-endpoint'):
        canonicalize(parse_diagram("2\n1 3 1 3\n3 4 2 4\n"))


@pytest.mark.parametrize('mode', diagram.MODES)
def test_generate_random_is_connected_and_canonical(mode):
    diag = generate_random(25, seed=7, mode=mode)
    assert diag.n == 25
    assert validate(diag) == []
    assert canonicalize(diag)[0] == diag
    assert is_connected(build_graph(diag))


def test_generate_random_modes_have_their_shape():
    for trap in generate_random(12, seed=3, mode='interval').trapezoids:
        assert (trap.a, trap.b) == (trap.c, trap.d)
    for trap in generate_random(12, seed=3, mode='permutation').trapezoids:
        assert trap.a == trap.b and trap.c == trap.d


def test_generate_random_is_deterministic():
    assert serialize(generate_random(30, 11)) == serialize(generate_random(30, 11))
    assert serialize(generate_random(30, 11)) != serialize(generate_random(30, 12))


def test_generate_accepts_any_integer_seed():
    assert generate_random(12, seed=-1) == generate_random(12, seed=2 ** 64 - 1)
    assert generate_random(12, seed=2 ** 70 + 5) == generate_random(12, seed=5)


def test_generate_single_vertex():
    diag = generate_random(1, seed=0)
    assert serialize(diag).splitlines()[0] == '1'
    assert len(serialize(diag).splitlines()) == 2


def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate_random(0, seed=1)
    with pytest.raises(ValueError, match='unknown mode'):
        generate_random(5, seed=1, mode='circle')


def test_generate_gives_up_after_attempt_limit(monkeypatch):
    monkeypatch.setattr(diagram, 'MAX_GENERATION_ATTEMPTS', 0)
    with pytest.raises(GenerationError):
        generate_random(5, seed=1)
