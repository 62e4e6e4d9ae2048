"""Python front end for the forge C++ core.

Graphs and pairs are plain dicts in the same JSON layout the CLI reads and writes.
"""

import json

from . import _forge
from ._forge import ForgeError, ResourceError

__all__ = [
    "ForgeError",
    "ResourceError",
    "basic_piece",
    "betti",
    "condition_star",
    "emit_dot",
    "figure_eight",
    "finite_ends_graph",
    "graph_hash",
    "k1_infinite",
    "run_pipeline",
    "validate",
    "verify_dir",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def figure_eight():
    return json.loads(_forge.figure_eight())


def basic_piece(name):
    return json.loads(_forge.basic_piece(name))


def finite_ends_graph(k, depth):
    return json.loads(_forge.finite_ends_graph(k, depth))


def validate(graph):
    """List of (problem, location) pairs; empty when the graph is a valid C-graph."""
    return _forge.validate_graph(_dump(graph))


def betti(graph):
    return _forge.betti(_dump(graph))


def graph_hash(graph):
    return _forge.graph_hash(_dump(graph))


def emit_dot(graph, name="G"):
    return _forge.emit_dot(_dump(graph), name)


def condition_star(pair):
    return _forge.condition_star(_dump(pair))


def k1_infinite(pair):
    return _forge.k1_infinite(_dump(pair))


def run_pipeline(pair=None, *, depth=3, tower_floors=2, max_vertices=3_000_000, finite_ends=0, out=None):
    """Run pair -> tower -> leaf report and return the report dict.

    With `out`, the tower directory and manifest are written there as well.
    """
    if pair is None and not finite_ends:
        raise ValueError("give a pair or finite_ends")
    text = _forge.run_pipeline(
        "" if pair is None else _dump(pair), depth, tower_floors, max_vertices, finite_ends, str(out) if out else ""
    )
    return json.loads(text)


def verify_dir(path):
    return _forge.verify_dir(str(path))
