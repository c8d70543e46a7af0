import json

from graph import build_graph
from spanner import parse_tree
from utils import graph_to_dot, read_text, save_json, write_text


def test_write_text_to_stdout(capsys):
    write_text("hello\n")
    assert capsys.readouterr().out == "hello\n"


def test_write_text_creates_parent_dirs(tmp_path):
    path = tmp_path / 'nested' / 'out.txt'
    write_text("x\n", str(path))
    assert read_text(str(path)) == "x\n"


def test_save_json(tmp_path):
    path = tmp_path / 'report.json'
    save_json({'b': 1, 'a': [1, 2]}, str(path))
    assert json.loads(path.read_text()) == {'a': [1, 2], 'b': 1}


def test_graph_to_dot_marks_tree_edges(d5):
    dot = graph_to_dot(build_graph(d5), parse_tree("5\n0 3 1 5 3\n"))
    assert '  1 -- 3 [style=bold];' in dot
    assert '  2 -- 4;' in dot
    assert dot.count('[style=bold]') == 4
