import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from diagram import Diagram, Trapezoid, parse_diagram  # noqa: E402
from graph import build_graph  # noqa: E402

D5_TEXT = """5
1 4 2 5
2 6 1 3
3 7 4 8
5 9 6 9
8 10 7 10
"""

# tree used by the stretch examples: edges 1-3, 2-3, 3-5, 4-5
D5_STRETCH3_TREE = "5\n0 3 1 5 3\n"


def permutation_diagram(pi):
    """Permutation diagram: vertex i joins top point i to bottom point pi[i - 1]."""
    return Diagram(tuple(Trapezoid(i, i, p, p) for i, p in enumerate(pi, start=1)))


def interval_diagram(intervals):
    return Diagram(tuple(Trapezoid(lo, hi, lo, hi) for lo, hi in intervals))


@pytest.fixture
def d5():
    return parse_diagram(D5_TEXT)


@pytest.fixture
def d5_graph(d5):
    return build_graph(d5)


@pytest.fixture
def c4():
    return permutation_diagram([3, 4, 1, 2])


@pytest.fixture
def chain4():
    return interval_diagram([(1, 3), (2, 5), (4, 7), (6, 8)])


@pytest.fixture
def star_pendant():
    return interval_diagram([(1, 4), (3, 5), (2, 7), (6, 8)])


@pytest.fixture
def l7_instance():
    return permutation_diagram([4, 5, 1, 6, 2, 3])


@pytest.fixture
def l8_instance():
    return permutation_diagram([4, 6, 1, 5, 2, 3])


@pytest.fixture
def d_set_instance():
    return permutation_diagram([4, 1, 5, 6, 2, 3])


@pytest.fixture
def d5_file(tmp_path):
    path = tmp_path / 'd5.txt'
    path.write_text(D5_TEXT)
    return str(path)
