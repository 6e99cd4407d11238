"""Reading and writing graphs, subspaces and families."""

from __future__ import annotations

import json
from collections.abc import Iterable
from pathlib import Path

from coarsequot.errors import ParseError
from coarsequot.graphs.core import MetricGraph, Subspace


def _parse_int(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected a vertex id, got {token!r}", line) from None
    if value < 0:
        raise ParseError(f"negative vertex id {value}", line)
    return value


def parse_edge_list(text: str) -> MetricGraph:
    """Parse ``u v`` lines; blank lines and ``#`` comments are skipped.

    Raises:
        ParseError: On a malformed line, with its 1-based line number.
    """
    edges: list[tuple[int, int]] = []
    top = -1
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two vertex ids, got {len(tokens)} fields", number)
        u, v = (_parse_int(token, number) for token in tokens)
        edges.append((u, v))
        top = max(top, u, v)
    if top < 0:
        raise ParseError("no edges found")
    return MetricGraph(top + 1, edges)


def graph_from_dict(payload: dict[str, object]) -> MetricGraph:
    """Build a graph from its ``{"n", "edges", "labels"}`` form.

    Raises:
        ParseError: If a field is missing or has the wrong shape.
    """
    try:
        n = int(payload["n"])  # type: ignore[arg-type]
        edges = [(int(u), int(v)) for u, v in payload["edges"]]  # type: ignore[union-attr]
        raw_labels = payload.get("labels") or {}
        labels = {int(k): str(v) for k, v in raw_labels.items()}  # type: ignore[union-attr]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid graph JSON: {e}") from e
    return MetricGraph(n, edges, labels)


def read_graph(path: str | Path) -> MetricGraph:
    """Read a graph from a ``.json`` file or a plain edge list."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
        return graph_from_dict(payload)
    return parse_edge_list(text)


def parse_subspace(text: str, host: MetricGraph, name: str = "") -> Subspace:
    """Parse one vertex id per line."""
    members = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            members.append(_parse_int(line, number))
    return Subspace.of(host, members, name)


def read_family(path: str | Path, host: MetricGraph) -> list[Subspace]:
    """Read a family file: a JSON list of vertex lists, or ``{"subspaces": [...]}``.

    Raises:
        ParseError: If the file is not a list of vertex lists.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from e
    names: list[str] = []
    if isinstance(payload, dict):
        names = [str(name) for name in payload.get("names", [])]
        payload = payload.get("subspaces")
    if not isinstance(payload, list) or not all(isinstance(item, list) for item in payload):
        raise ParseError("family must be a list of vertex lists")
    return [
        Subspace.of(host, item, names[i] if i < len(names) else f"Y{i}")
        for i, item in enumerate(payload)
    ]


def write_graph(graph: MetricGraph, path: str | Path) -> None:
    """Write the JSON form of ``graph``."""
    Path(path).write_text(json.dumps(graph.to_dict(), sort_keys=True, indent=2) + "\n")


def to_dot(
    graph: MetricGraph, highlighted: Iterable[int] = (), name: str = "coarsequot"
) -> str:
    """Render ``graph`` as Graphviz DOT; highlighted vertices are drawn as filled boxes."""
    marked = set(highlighted)
    lines = [f"graph {name} {{"]
    for v in graph.vertices():
        attrs = [f'label="{graph.label(v)}"']
        if v in marked:
            attrs.append('shape=box, style=filled, fillcolor="lightblue"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in sorted(graph.edges):
        style = " [style=dashed]" if u in marked or v in marked else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
