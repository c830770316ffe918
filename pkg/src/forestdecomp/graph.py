"""Multigraphs, stub graphs, cuts and canonical forms of forests.

Vertices are dense integers ``0..n-1``.  An edge id is the position of the
edge in ``Multigraph.edges``; a stub id is ``edge_count + position`` in
``StubGraph.stubs`` so that edges and stubs share one id space (the
"elements" of a stub graph).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or out-of-range vertex ids."""


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("negative vertex count")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        n = self.vertex_count
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {i} = ({u}, {v}) has an endpoint outside [0, {n})")
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [(u, v, i) for i, (u, v) in enumerate(self.edges)]

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident with each vertex; a loop appears twice."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise GraphError(f"vertex {v} outside [0, {self.vertex_count})")

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return len(self.incidence[v])

    def other(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if u == v else u

    def components(self, edge_ids: Iterable[int] | None = None) -> list[list[int]]:
        """Vertex sets of the connected components of (V, edge_ids)."""
        return _components(self.vertex_count, self.edges, edge_ids)

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components()) == 1

    def crossing(self, side: Iterable[int]) -> frozenset[int]:
        s = set(side)
        return frozenset(i for i, (u, v) in enumerate(self.edges) if (u in s) != (v in s))

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True


def _components(n, edges, edge_ids=None) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ids = range(len(edges)) if edge_ids is None else edge_ids
    for i in ids:
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = defaultdict(list)
    for x in range(n):
        groups[find(x)].append(x)
    return [groups[r] for r in sorted(groups)]


@dataclass(frozen=True)
class StubGraph:
    """A multigraph together with stubs (unary hyperedges carrying an index)."""

    base: Multigraph
    stubs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        stubs = tuple((int(v), int(i)) for v, i in self.stubs)
        for v, idx in stubs:
            self.base.check_vertex(v)
            if idx < 1:
                raise GraphError(f"stub index must be positive, got {idx}")
        object.__setattr__(self, "stubs", stubs)

    @classmethod
    def of(cls, vertex_count: int, edges=(), stubs=()) -> "StubGraph":
        return cls(Multigraph(vertex_count, tuple(edges)), tuple(stubs))

    @property
    def vertex_count(self) -> int:
        return self.base.vertex_count

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.base.edges

    @property
    def edge_count(self) -> int:
        return self.base.edge_count

    @property
    def element_count(self) -> int:
        return self.base.edge_count + len(self.stubs)

    def stub_ids(self) -> range:
        m = self.base.edge_count
        return range(m, m + len(self.stubs))

    def is_stub(self, element: int) -> bool:
        return element >= self.base.edge_count

    def stub(self, sid: int) -> tuple[int, int]:
        """(vertex, index) of stub ``sid``."""
        return self.stubs[sid - self.base.edge_count]

    @cached_property
    def stub_incidence(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        m = self.base.edge_count
        for j, (v, _) in enumerate(self.stubs):
            inc[v].append(m + j)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return self.base.degree(v) + len(self.stub_incidence[v])

    def min_degree(self) -> float:
        if self.vertex_count == 0:
            return float("inf")
        return min(self.degree(v) for v in range(self.vertex_count))


def as_stub_graph(g: Multigraph | StubGraph) -> StubGraph:
    return g if isinstance(g, StubGraph) else StubGraph(g)


def degree(g: Multigraph | StubGraph, v: int) -> int:
    """Number of incident edges (loops twice) plus incident stubs."""
    return g.degree(v)


def minus(g: Multigraph | StubGraph) -> Multigraph:
    """Drop every stub; edge ids are unchanged."""
    return g.base if isinstance(g, StubGraph) else g


class Restriction(NamedTuple):
    graph: StubGraph
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    stub_map: dict[int, int]

    def inverse_vertices(self) -> list[int]:
        inv = [0] * len(self.vertex_map)
        for old, new in self.vertex_map.items():
            inv[new] = old
        return inv

    def inverse_elements(self) -> dict[int, int]:
        inv = {new: old for old, new in self.edge_map.items()}
        inv.update({new: old for old, new in self.stub_map.items()})
        return inv


def restrict(
    g: Multigraph | StubGraph,
    vertices: Iterable[int],
    edge_ids: Iterable[int] | None = None,
    stub_ids: Iterable[int] | None = None,
) -> Restriction:
    """Sub-stub-graph on ``vertices`` with dense relabelling.

    Without ``edge_ids``/``stub_ids`` this is the induced subgraph; otherwise
    only the listed elements are kept (they must lie inside ``vertices``).
    """
    g = as_stub_graph(g)
    verts = sorted(set(vertices))
    for v in verts:
        g.base.check_vertex(v)
    vmap = {v: i for i, v in enumerate(verts)}
    if edge_ids is None:
        edge_ids = [i for i, (u, v) in enumerate(g.edges) if u in vmap and v in vmap]
    if stub_ids is None:
        stub_ids = [s for s in g.stub_ids() if g.stub(s)[0] in vmap]
    edge_ids = sorted(edge_ids)
    stub_ids = sorted(stub_ids)
    new_edges = []
    for e in edge_ids:
        u, v = g.edges[e]
        if u not in vmap or v not in vmap:
            raise GraphError(f"edge {e} leaves the vertex set")
        new_edges.append((vmap[u], vmap[v]))
    emap = {e: i for i, e in enumerate(edge_ids)}
    m = len(new_edges)
    new_stubs = []
    for s in stub_ids:
        v, idx = g.stub(s)
        if v not in vmap:
            raise GraphError(f"stub {s} lies outside the vertex set")
        new_stubs.append((vmap[v], idx))
    smap = {s: m + j for j, s in enumerate(stub_ids)}
    sub = StubGraph(Multigraph(len(verts), tuple(new_edges)), tuple(new_stubs))
    return Restriction(sub, vmap, emap, smap)


def induced(g: Multigraph | StubGraph, vertices: Iterable[int]) -> tuple[StubGraph, dict[int, int]]:
    """Induced sub-stub-graph and the old-to-new vertex map."""
    r = restrict(g, vertices)
    return r.graph, r.vertex_map


@dataclass(frozen=True)
class Cut:
    side_a: frozenset[int]
    side_b: frozenset[int]
    crossing: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.crossing)

    @classmethod
    def from_side(cls, g: Multigraph | StubGraph, side_a: Iterable[int]) -> "Cut":
        base = minus(g)
        a = frozenset(side_a)
        b = frozenset(range(base.vertex_count)) - a
        return cls(a, b, base.crossing(a))

    def is_valid(self, g: Multigraph | StubGraph) -> bool:
        base = minus(g)
        if self.side_a & self.side_b or (self.side_a | self.side_b) != frozenset(range(base.vertex_count)):
            return False
        return base.crossing(self.side_a) == self.crossing


# ---------------------------------------------------------------- trees


def _adjacency(t: Multigraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(t.vertex_count)]
    for u, v in t.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_forest(t: Multigraph) -> bool:
    return t.is_simple() and t.edge_count == t.vertex_count - len(t.components())


def is_tree(t: Multigraph) -> bool:
    return t.vertex_count >= 1 and is_forest(t) and t.edge_count == t.vertex_count - 1


def _rooted_codes(adj: Sequence[Sequence[int]], root: int, allowed=None) -> tuple[dict[int, str], dict[int, int], list[int]]:
    """AHU codes of every vertex of the tree hanging from ``root``."""
    parent = {root: -1}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y != parent[x] and (allowed is None or y in allowed):
                parent[y] = x
                order.append(y)
    codes: dict[int, str] = {}
    for x in reversed(order):
        kids = sorted(codes[y] for y in adj[x] if parent.get(y) == x and y != parent[x])
        codes[x] = "(" + "".join(kids) + ")"
    return codes, parent, order


def _centroids(adj, comp: Sequence[int]) -> list[int]:
    members = set(comp)
    root = comp[0]
    _, parent, order = _rooted_codes(adj, root, members)
    size = {x: 1 for x in order}
    for x in reversed(order):
        if parent[x] >= 0:
            size[parent[x]] += size[x]
    total = len(order)
    best = []
    best_val = total + 1
    for x in order:
        heaviest = total - size[x]
        for y in adj[x]:
            if parent.get(y) == x and y != parent[x]:
                heaviest = max(heaviest, size[y])
        if heaviest < best_val:
            best, best_val = [x], heaviest
        elif heaviest == best_val:
            best.append(x)
    return sorted(best)


def _tree_code(adj, comp: Sequence[int]) -> tuple[str, int]:
    members = set(comp)
    best = None
    for c in _centroids(adj, comp):
        code = _rooted_codes(adj, c, members)[0][c]
        if best is None or code < best[0]:
            best = (code, c)
    return best


@dataclass(frozen=True)
class TreeShape:
    """Canonical form of a free forest; equality means isomorphism."""

    canonical: str
    edge_count: int
    vertex_count: int
    component_sizes: tuple[int, ...]
    leaves: tuple[tuple[int, ...], ...] = field(compare=False)
    graph: Multigraph = field(compare=False, repr=False)

    @property
    def is_proper(self) -> bool:
        return all(s >= 1 for s in self.component_sizes)

    @property
    def is_tree(self) -> bool:
        return len(self.component_sizes) == 1

    def __hash__(self):
        return hash(self.canonical)

    def __str__(self):
        return self.canonical


def canonical_shape(t: Multigraph) -> TreeShape:
    """Canonical shape of a simple forest (rooted-at-centroid AHU codes)."""
    if not t.is_simple():
        raise GraphError("forest must be simple (no loops or parallel edges)")
    if not is_forest(t):
        raise GraphError("input contains a cycle")
    adj = _adjacency(t)
    comps = t.components()
    entries = []
    for comp in comps:
        code, _ = _tree_code(adj, comp)
        leaves = tuple(v for v in comp if len(adj[v]) == 1)
        entries.append((code, len(comp) - 1, leaves))
    entries.sort(key=lambda e: (e[0], e[1]))
    canonical = "|".join(e[0] for e in entries)
    return TreeShape(
        canonical=canonical,
        edge_count=t.edge_count,
        vertex_count=t.vertex_count,
        component_sizes=tuple(e[1] for e in entries),
        leaves=tuple(e[2] for e in entries),
        graph=t,
    )


def tree_isomorphism(a: Multigraph, b: Multigraph) -> dict[int, int] | None:
    """A vertex bijection a -> b preserving edges, or None (trees only)."""
    if not (is_tree(a) and is_tree(b)) or a.vertex_count != b.vertex_count:
        return None
    adj_a, adj_b = _adjacency(a), _adjacency(b)
    all_a, all_b = list(range(a.vertex_count)), list(range(b.vertex_count))
    code_a, ra = _tree_code(adj_a, all_a)
    codes_a, par_a, _ = _rooted_codes(adj_a, ra)
    for rb in _centroids(adj_b, all_b):
        codes_b, par_b, _ = _rooted_codes(adj_b, rb)
        if codes_b[rb] != code_a:
            continue
        mapping = {ra: rb}
        stack = [(ra, rb)]
        while stack:
            x, y = stack.pop()
            kids_a = sorted((codes_a[c], c) for c in adj_a[x] if par_a.get(c) == x and c != par_a[x])
            kids_b = sorted((codes_b[c], c) for c in adj_b[y] if par_b.get(c) == y and c != par_b[y])
            for (ca, xa), (cb, yb) in zip(kids_a, kids_b):
                assert ca == cb
                mapping[xa] = yb
                stack.append((xa, yb))
        return mapping
    return None


def relabel(edges: Iterable[tuple[object, object]], vertices: Iterable[object] = ()) -> tuple[Multigraph, dict]:
    """Multigraph from arbitrary hashable labels; returns the label map."""
    label: dict = {}
    for v in vertices:
        label.setdefault(v, len(label))
    out = []
    for u, v in edges:
        label.setdefault(u, len(label))
        label.setdefault(v, len(label))
        out.append((label[u], label[v]))
    return Multigraph(len(label), tuple(out)), label


def path_graph(length: int) -> Multigraph:
    """Path with ``length`` edges."""
    return Multigraph(length + 1, tuple((i, i + 1) for i in range(length)))


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def cycle_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def disjoint_union(graphs: Sequence[Multigraph]) -> Multigraph:
    edges = []
    offset = 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges)
        offset += h.vertex_count
    return Multigraph(offset, tuple(edges))


def edge_subgraph(g: Multigraph, edge_ids: Iterable[int]) -> tuple[Multigraph, dict[int, int]]:
    """Graph formed by the given edges on their own endpoints (dense relabel)."""
    ids = sorted(edge_ids)
    sub, label = relabel(g.edges[e] for e in ids)
    return sub, label


def bfs_distances(g: Multigraph, source: int, edge_ids: Iterable[int] | None = None) -> list[float]:
    allowed = None if edge_ids is None else set(edge_ids)
    dist = [float("inf")] * g.vertex_count
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for x in frontier:
            for e in g.incidence[x]:
                if allowed is not None and e not in allowed:
                    continue
                y = g.other(e, x)
                if dist[y] == float("inf"):
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def is_spanning_tree(g: Multigraph, edge_ids: Iterable[int]) -> bool:
    ids = list(edge_ids)
    if len(set(ids)) != len(ids) or len(ids) != max(g.vertex_count - 1, 0):
        return False
    if any(g.edges[e][0] == g.edges[e][1] for e in ids):
        return False
    return len(g.components(ids)) == 1 if g.vertex_count else True


def degrees_in(g: Multigraph, edge_ids: Iterable[int]) -> list[int]:
    deg = [0] * g.vertex_count
    for e in edge_ids:
        u, v = g.edges[e]
        deg[u] += 1
        deg[v] += 1
    return deg


def counts_by(items: Iterable, key) -> Mapping:
    out: dict = defaultdict(int)
    for x in items:
        out[key(x)] += 1
    return dict(out)


def spanning_subgraph(g: Multigraph, edge_ids: Iterable[int]) -> tuple[Multigraph, list[int]]:
    """Same vertex set, only the given edges; second value maps new edge id -> old."""
    ids = sorted(edge_ids)
    return Multigraph(g.vertex_count, tuple(g.edges[e] for e in ids)), ids
