"""Text and JSON graph formats.

Text: a header ``n m s`` followed by m lines ``u v`` and s lines
``v index``.  Blank lines and lines starting with ``#`` are ignored.
JSON: ``{"vertices": n, "edges": [[u, v], ...], "stubs": [[v, index], ...]}``;
element ids are implicit (edges first, then stubs) and may be listed
explicitly as ``{"id": i, "u": u, "v": v}`` objects.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graph import GraphError, Multigraph, StubGraph, as_stub_graph


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())
        self.line = line
        self.source = source


def _ints(tokens, count, lineno, source, what):
    if len(tokens) != count:
        raise ParseError(f"expected {count} integers for {what}, found {len(tokens)}", lineno, source)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"{what} must be integers, got {' '.join(tokens)!r}", lineno, source) from None


def parse_text(text: str, source: str | None = None) -> StubGraph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty graph file (missing header 'n m s')", 1, source)
    lineno, tokens = rows[0]
    if len(tokens) == 2:
        tokens = tokens + ["0"]
    n, m, s = _ints(tokens, 3, lineno, source, "the header 'n m s'")
    if min(n, m, s) < 0:
        raise ParseError("header values must be non-negative", lineno, source)
    body = rows[1:]
    if len(body) != m + s:
        last = body[-1][0] if body else lineno
        raise ParseError(f"header announces {m} edges and {s} stubs but {len(body)} lines follow", last, source)
    edges, stubs = [], []
    for lineno, tokens in body[:m]:
        u, v = _ints(tokens, 2, lineno, source, "an edge 'u v'")
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"vertex {x} out of range 0..{n - 1}", lineno, source)
        edges.append((u, v))
    for lineno, tokens in body[m:]:
        v, idx = _ints(tokens, 2, lineno, source, "a stub 'v index'")
        if not 0 <= v < n:
            raise ParseError(f"vertex {v} out of range 0..{n - 1}", lineno, source)
        stubs.append((v, idx))
    return StubGraph.of(n, tuple(edges), tuple(stubs))


def to_text(g: Multigraph | StubGraph, header: str | None = None) -> str:
    g = as_stub_graph(g)
    lines = [f"# {header}"] if header else []
    lines.append(f"{g.vertex_count} {g.edge_count} {len(g.stubs)}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    lines.extend(f"{v} {idx}" for v, idx in g.stubs)
    return "\n".join(lines) + "\n"


def graph_to_json(g: Multigraph | StubGraph) -> dict:
    g = as_stub_graph(g)
    return {
        "vertices": g.vertex_count,
        "edges": [{"id": i, "u": u, "v": v} for i, (u, v) in enumerate(g.edges)],
        "stubs": [{"id": g.edge_count + j, "vertex": v, "index": idx} for j, (v, idx) in enumerate(g.stubs)],
    }


def graph_from_json(obj: dict, source: str | None = None) -> StubGraph:
    try:
        n = int(obj["vertices"])
        edges, stubs = [], []
        for i, e in enumerate(obj.get("edges", [])):
            if isinstance(e, dict):
                if "id" in e and int(e["id"]) != i:
                    raise ParseError(f"edge ids must be 0..m-1 in order (entry {i} has id {e['id']})", None, source)
                edges.append((int(e["u"]), int(e["v"])))
            else:
                u, v = e
                edges.append((int(u), int(v)))
        m = len(edges)
        for j, st in enumerate(obj.get("stubs", [])):
            if isinstance(st, dict):
                if "id" in st and int(st["id"]) != m + j:
                    raise ParseError(f"stub ids must follow the edge ids (entry {j} has id {st['id']})", None, source)
                stubs.append((int(st["vertex"]), int(st["index"])))
            else:
                v, idx = st
                stubs.append((int(v), int(idx)))
        return StubGraph.of(n, tuple(edges), tuple(stubs))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed graph JSON: {exc}", None, source) from None
    except GraphError as exc:
        raise ParseError(str(exc), None, source) from None


def parse_graph(text: str, source: str | None = None) -> StubGraph:
    """Parse either format (JSON when the first non-blank character is '{')."""
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, source) from None
        if "graph" in obj and "vertices" not in obj:
            obj = obj["graph"]
        elif "result" in obj and isinstance(obj["result"], dict) and "graph" in obj["result"]:
            obj = obj["result"]["graph"]
        return graph_from_json(obj, source)
    try:
        return parse_text(text, source)
    except GraphError as exc:
        raise ParseError(str(exc), None, source) from None


def load_graph(path: str | Path) -> StubGraph:
    path = Path(path)
    return parse_graph(path.read_text(), str(path))


def load_forest(path: str | Path) -> Multigraph:
    g = load_graph(path)
    if g.stubs:
        raise ParseError("a forest file cannot contain stubs", None, str(path))
    return g.base
