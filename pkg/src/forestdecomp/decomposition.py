"""Embeddings, decompositions and the independent decomposition checker.

The checker only relies on ``graph``: it expands every stub by its twig,
rebuilds the part as a plain graph and compares canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .graph import GraphError, Multigraph, StubGraph, TreeShape, as_stub_graph, canonical_shape, is_tree


@dataclass(frozen=True)
class Twig:
    """A proper tree with a designated leaf ``root``."""

    tree: Multigraph
    root: int = 0

    def problem(self) -> str | None:
        if not is_tree(self.tree) or self.tree.edge_count == 0:
            return "twig is not a proper tree"
        if not 0 <= self.root < self.tree.vertex_count or self.tree.degree(self.root) != 1:
            return "twig root is not a leaf"
        return None

    @classmethod
    def single_edge(cls) -> "Twig":
        return cls(Multigraph(2, ((0, 1),)), 0)


def twig_of(tree: Multigraph, root: int) -> Twig:
    """Twig with the same tree, renumbered so the root is vertex 0."""
    order = [root] + [v for v in range(tree.vertex_count) if v != root]
    index = {v: i for i, v in enumerate(order)}
    return Twig(Multigraph(tree.vertex_count, tuple((index[u], index[v]) for u, v in tree.edges)), 0)


@dataclass(frozen=True)
class Embedding:
    target: TreeShape
    edges: frozenset[int]
    stubs: frozenset[int] = frozenset()
    twigs: Mapping[int, Twig] = field(default_factory=dict, compare=False)

    @property
    def elements(self) -> frozenset[int]:
        return self.edges | self.stubs

    def expanded(self, host: StubGraph) -> Multigraph:
        """The part with every stub replaced by its twig (fresh twig vertices)."""
        label: dict = {}
        out = []

        def lab(x):
            if x not in label:
                label[x] = len(label)
            return label[x]

        for e in sorted(self.edges):
            u, v = host.edges[e]
            out.append((lab(("h", u)), lab(("h", v))))
        for s in sorted(self.stubs):
            v, _ = host.stub(s)
            twig = self.twigs[s]
            for a, b in twig.tree.edges:
                xa = ("h", v) if a == twig.root else ("t", s, a)
                xb = ("h", v) if b == twig.root else ("t", s, b)
                out.append((lab(xa), lab(xb)))
        return Multigraph(len(label), tuple(out))


class Verdict(NamedTuple):
    ok: bool
    message: str = ""
    part: int | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Decomposition:
    host: StubGraph
    parts: tuple[Embedding, ...]

    def counts(self) -> dict[TreeShape, int]:
        out: dict[TreeShape, int] = {}
        for p in self.parts:
            out[p.target] = out.get(p.target, 0) + 1
        return out

    def count(self, target: TreeShape) -> int:
        return sum(1 for p in self.parts if p.target == target)


def verify(d: Decomposition) -> Verdict:
    """Check that the parts partition E(host) and each part is an embedding of its target."""
    try:
        host = as_stub_graph(d.host)
    except Exception as exc:  # verification never throws
        return Verdict(False, f"host is malformed: {exc}")
    m = host.edge_count
    total = host.element_count
    seen: dict[int, int] = {}
    shapes: dict[int, TreeShape] = {}
    for i, part in enumerate(d.parts):
        if not part.edges and not part.stubs:
            return Verdict(False, f"part {i} is empty", i)
        for e in part.edges:
            if not (isinstance(e, int) and 0 <= e < m):
                return Verdict(False, f"part {i} lists {e}, which is not an edge of the host", i)
        for s in part.stubs:
            if not (isinstance(s, int) and m <= s < total):
                return Verdict(False, f"part {i} lists {s}, which is not a stub of the host", i)
        for x in part.edges | part.stubs:
            if x in seen:
                return Verdict(False, f"element {x} is used by parts {seen[x]} and {i}", i)
            seen[x] = i
        if set(part.twigs) != set(part.stubs):
            return Verdict(False, f"part {i} has no twig assignment matching its stubs", i)
        indices = [host.stub(s)[1] for s in part.stubs]
        if len(set(indices)) != len(indices):
            return Verdict(False, f"part {i} has two stubs with the same index", i)
        for s in part.stubs:
            problem = part.twigs[s].problem()
            if problem:
                return Verdict(False, f"part {i}: {problem} (stub {s})", i)
        target = part.target
        if target.canonical not in shapes:
            shapes[target.canonical] = target
        try:
            shape = canonical_shape(part.expanded(host))
        except GraphError:
            return Verdict(False, f"part {i} not isomorphic to its target (expansion is not a forest)", i)
        if shape != target:
            return Verdict(False, f"part {i} not isomorphic to its target", i)
    if len(seen) != total:
        missing = min(set(range(total)) - set(seen))
        return Verdict(False, f"element {missing} is not covered")
    return Verdict(True, "ok")


def regroup(d: Decomposition, groups: Iterable[Iterable[int]], target: TreeShape) -> Decomposition:
    """Merge parts of a stub-free decomposition into larger parts of ``target``."""
    parts = []
    for grp in groups:
        edges = frozenset().union(*(d.parts[i].edges for i in grp))
        parts.append(Embedding(target, edges))
    return Decomposition(d.host, tuple(parts))


# -------------------------------------------------------------- json io


def twig_to_json(t: Twig) -> dict:
    return {"vertices": t.tree.vertex_count, "edges": [list(e) for e in t.tree.edges], "root": t.root}


def twig_from_json(obj: dict) -> Twig:
    return Twig(Multigraph(int(obj["vertices"]), tuple(tuple(e) for e in obj["edges"])), int(obj["root"]))


def decomposition_to_json(d: Decomposition) -> dict:
    parts = []
    for p in d.parts:
        parts.append(
            {
                "target": p.target.canonical,
                "target_edges": [list(e) for e in p.target.graph.edges],
                "target_vertices": p.target.graph.vertex_count,
                "edges": sorted(p.edges),
                "stubs": sorted(p.stubs),
                "twigs": {str(s): twig_to_json(p.twigs[s]) for s in sorted(p.stubs)},
            }
        )
    return {"parts": parts}


def decomposition_from_json(host: StubGraph, obj: dict) -> Decomposition:
    parts = []
    cache: dict[str, TreeShape] = {}
    for p in obj["parts"]:
        key = p["target"]
        if key not in cache:
            g = Multigraph(int(p["target_vertices"]), tuple(tuple(e) for e in p["target_edges"]))
            shape = canonical_shape(g)
            if shape.canonical != key:
                raise GraphError(f"target graph does not match its canonical string {key}")
            cache[key] = shape
        twigs = {int(s): twig_from_json(t) for s, t in p.get("twigs", {}).items()}
        parts.append(Embedding(cache[key], frozenset(p["edges"]), frozenset(p.get("stubs", [])), twigs))
    return Decomposition(as_stub_graph(host), tuple(parts))
