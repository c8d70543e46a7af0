import os
import sys
import json


def ensure_output_dir(output_dir):
    """Create output directory if it doesn't exist."""
    os.makedirs(output_dir, exist_ok=True)


def save_json(data, output_path):
    """
    Save a report to a JSON file.

    Args:
        data: JSON-serializable dict or list
        output_path: Output JSON file path
    """
    with open(output_path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True)


def read_text(path):
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def write_text(text, path=None):
    """
    Write text to a file, or to standard output when no path is given.

    Args:
        text: Content to write
        path: Output file path or None
    """
    if path is None:
        sys.stdout.write(text)
        return
    parent = os.path.dirname(path)
    if parent:
        ensure_output_dir(parent)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def graph_to_dot(g, tree=None):
    """
    Render an intersection graph as Graphviz DOT.

    Args:
        g: IntersectionGraph
        tree: Optional object with a 1-indexed parent array; its edges are drawn bold

    Returns:
        DOT text with vertices and edges in ascending order
    """
    bold = set()
    if tree is not None:
        bold = {(min(v, p), max(v, p)) for v, p in enumerate(tree.parent) if v and p}

    lines = ['graph G {']
    lines.extend(f'  {v};' for v in range(1, g.n + 1))
    for u, v in g.edges():
        style = ' [style=bold]' if (u, v) in bold else ''
        lines.append(f'  {u} -- {v}{style};')
    lines.append('}')
    return '\n'.join(lines) + '\n'
