"""Text and JSON formats for graphs and discrete networks.

Graph file::

    # comment
    node A
    node U hidden
    edge U A

Vertex ids follow the order of ``node`` lines; ``edge`` lines may refer to
nodes declared later in the file.

Network file (categorical CPTs over a graph that is already loaded)::

    card A 3
    cpt A 0.2 0.3 0.5
    outcome 0 1.5

Each ``cpt`` line is one row; rows follow lexicographic order of the parent
states, parents in vertex-id order, last parent varying fastest. Vertices
without a ``card`` line have two states. ``outcome`` gives the outcome's
state values, ``values <label> ...`` those of any other vertex.
"""

from __future__ import annotations

import json
from collections import defaultdict
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import CycleError, GraphError, ParseError
from .graph import LABEL_RE, Dag, UGraph
from .oracle import DiscreteBN

__all__ = [
    "parse_graph",
    "serialize_graph",
    "load_graph",
    "load_example",
    "example_names",
    "graph_to_json",
    "graph_from_json",
    "parse_bn",
    "serialize_bn",
    "load_bn",
    "serialize_ugraph",
]


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_graph(text: str, path: str | None = None) -> Dag:
    labels: list[str] = []
    hidden: list[int] = []
    index: dict[str, int] = {}
    edge_lines: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node":
            if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "hidden"):
                raise ParseError("expected 'node <label> [hidden]'", lineno, path)
            label = parts[1]
            if not LABEL_RE.match(label):
                raise ParseError(f"bad label {label!r}", lineno, path)
            if label in index:
                raise ParseError(f"node {label} declared twice", lineno, path)
            index[label] = len(labels)
            if len(parts) == 3:
                hidden.append(len(labels))
            labels.append(label)
        elif kind == "edge":
            if len(parts) != 3:
                raise ParseError("expected 'edge <label> <label>'", lineno, path)
            edge_lines.append((lineno, parts[1], parts[2]))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, path)
    edges = []
    for lineno, u, w in edge_lines:
        for lab in (u, w):
            if lab not in index:
                raise ParseError(f"edge refers to undeclared node {lab!r}", lineno, path)
        if u == w:
            raise ParseError(f"self-loop on {u}", lineno, path)
        edges.append((index[u], index[w]))
    try:
        return Dag(labels, edges, hidden)
    except CycleError as exc:
        raise ParseError(str(exc), None, path) from exc


def serialize_graph(g: Dag) -> str:
    lines = [f"node {lab}" + (" hidden" if v in g.hidden else "") for v, lab in enumerate(g.labels)]
    lines += [f"edge {g.labels[u]} {g.labels[w]}" for u, w in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Dag) -> dict:
    return {
        "nodes": [{"label": lab, "hidden": v in g.hidden} for v, lab in enumerate(g.labels)],
        "edges": [[g.labels[u], g.labels[w]] for u, w in sorted(g.edges)],
    }


def graph_from_json(data: dict) -> Dag:
    try:
        labels = [n["label"] for n in data["nodes"]]
        hidden = [lab for lab, n in zip(labels, data["nodes"]) if n.get("hidden", False)]
        return Dag.from_labels(labels, [tuple(e) for e in data["edges"]], hidden)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from exc


def load_graph(path: str | Path) -> Dag:
    """Read a graph file; ``.json`` files use the JSON mirror."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read graph file: {exc.strerror}", None, str(path)) from exc
    if path.suffix == ".json":
        try:
            return graph_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, str(path)) from exc
        except GraphError as exc:
            raise ParseError(str(exc), None, str(path)) from exc
    return parse_graph(text, str(path))


def example_names() -> list[str]:
    return sorted(p.name[:-2] for p in (resources.files("optadj") / "data").iterdir() if p.name.endswith(".g"))


def load_example(name: str) -> Dag:
    """One of the bundled example graphs, e.g. ``fig1``."""
    if name not in example_names():
        raise ParseError(f"no bundled graph named {name!r}; available: {', '.join(example_names())}")
    ref = resources.files("optadj") / "data" / f"{name}.g"
    return parse_graph(ref.read_text(), f"{name}.g")


def serialize_ugraph(h: UGraph, labels) -> str:
    """Undirected graph as ``node`` and ``uedge`` lines; ``labels`` maps ids to names."""
    lines = [f"node {labels[v]}" for v in h.vertices]
    lines += [f"uedge {labels[u]} {labels[w]}" for u, w in sorted(h.edges)]
    return "\n".join(lines) + "\n"


def _floats(parts, lineno, path):
    try:
        return [float(x) for x in parts]
    except ValueError as exc:
        raise ParseError(f"expected numbers: {exc}", lineno, path) from exc


def parse_bn(text: str, g: Dag, outcome: int | None = None, path: str | None = None) -> DiscreteBN:
    cards = [2] * g.n
    rows: dict[int, list[tuple[int, list[float]]]] = defaultdict(list)
    values: dict[int, tuple[int, list[float]]] = {}

    def vertex(label, lineno):
        try:
            return g.index(label)
        except GraphError as exc:
            raise ParseError(f"unknown node {label!r}", lineno, path) from exc

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "card":
            if len(parts) != 3 or not parts[2].isdigit() or int(parts[2]) < 2:
                raise ParseError("expected 'card <label> <k>' with k >= 2", lineno, path)
            cards[vertex(parts[1], lineno)] = int(parts[2])
        elif kind == "cpt":
            if len(parts) < 3:
                raise ParseError("expected 'cpt <label> <p1> <p2> ...'", lineno, path)
            rows[vertex(parts[1], lineno)].append((lineno, _floats(parts[2:], lineno, path)))
        elif kind == "outcome":
            if outcome is None:
                raise ParseError("'outcome' line needs a query outcome", lineno, path)
            values[outcome] = (lineno, _floats(parts[1:], lineno, path))
        elif kind == "values":
            if len(parts) < 3:
                raise ParseError("expected 'values <label> <v1> ...'", lineno, path)
            values[vertex(parts[1], lineno)] = (lineno, _floats(parts[2:], lineno, path))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, path)

    cpts = []
    for v in range(g.n):
        pa_shape = tuple(cards[p] for p in g.parents(v))
        want = int(np.prod(pa_shape, dtype=int))
        got = rows.get(v, [])
        if len(got) != want:
            raise ParseError(f"{g.labels[v]} needs {want} cpt rows, found {len(got)}", got[-1][0] if got else None, path)
        for lineno, row in got:
            if len(row) != cards[v]:
                raise ParseError(f"cpt row of {g.labels[v]} needs {cards[v]} entries", lineno, path)
            if min(row) < 0 or abs(sum(row) - 1.0) > 1e-9:
                raise ParseError(f"cpt row of {g.labels[v]} is not a probability vector", lineno, path)
        table = np.array([r for _, r in got], dtype=float)
        table = table / table.sum(axis=1, keepdims=True)
        cpts.append(table.reshape(pa_shape + (cards[v],)))
    vals = []
    for v in range(g.n):
        if v in values:
            lineno, x = values[v]
            if len(x) != cards[v]:
                raise ParseError(f"{g.labels[v]} needs {cards[v]} values", lineno, path)
            vals.append(np.array(x))
        else:
            vals.append(np.arange(cards[v], dtype=float))
    return DiscreteBN(g, tuple(cards), tuple(cpts), tuple(vals))


def serialize_bn(bn: DiscreteBN) -> str:
    g = bn.dag
    lines = [f"card {g.labels[v]} {k}" for v, k in enumerate(bn.cards)]
    for v in range(g.n):
        for row in bn.cpts[v].reshape(-1, bn.cards[v]):
            lines.append(f"cpt {g.labels[v]} " + " ".join(repr(float(p)) for p in row))
    for v in range(g.n):
        lines.append(f"values {g.labels[v]} " + " ".join(repr(float(x)) for x in bn.values[v]))
    return "\n".join(lines) + "\n"


def load_bn(path: str | Path, g: Dag, outcome: int | None = None) -> DiscreteBN:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read network file: {exc.strerror}", None, str(path)) from exc
    return parse_bn(text, g, outcome, str(path))
