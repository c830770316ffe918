"""Small cuts with a highly connected side, and recursive peeling into stub graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .connectivity import global_min_cut, is_k_edge_connected
from .graph import Cut, GraphError, Multigraph, StubGraph, as_stub_graph, minus, restrict
from .sparse_trees import PreconditionError


def _side_key(side: frozenset[int]):
    return (len(side), min(side))


def find_small_cut(g: Multigraph | StubGraph, k: int, prefer: str = "smaller") -> Cut:
    """Cut (A, B) of order <= 2k with G[A] k-edge-connected or |A| = 1.

    Defined whenever some cut has order <= 2k (in particular whenever G is
    not k-edge-connected).  Starting from one side of a global minimum cut
    (``prefer`` picks which), A is replaced by a side of
    a sub-k cut of G[A] whose boundary in G stays within 2k, until G[A] is
    k-edge-connected or a single vertex.
    """
    base = minus(g)
    n = base.vertex_count
    if k < 1:
        raise ValueError("k must be positive")
    if n < 2:
        raise PreconditionError("graph needs at least two vertices")
    first = global_min_cut(base)
    if first.order > 2 * k:
        raise PreconditionError(f"every cut has order > {2 * k}; no small cut exists")
    a, b = first.side_a, first.side_b
    if prefer == "smaller":
        side = min(a, b, key=_side_key)
    elif prefer == "larger":
        side = max(a, b, key=lambda s: (len(s), -min(s)))
    else:
        raise ValueError(f"unknown preference {prefer!r}")
    for _ in range(n + 1):
        if len(side) == 1:
            break
        r = restrict(base, side, stub_ids=())
        sub = r.graph.base
        if is_k_edge_connected(sub, k):
            break
        inner = global_min_cut(sub)
        back = r.inverse_vertices()
        halves = [frozenset(back[x] for x in inner.side_a), frozenset(back[x] for x in inner.side_b)]
        ok = [h for h in halves if len(base.crossing(h)) <= 2 * k]
        if not ok:
            raise AssertionError("boundary identity violated: neither half has order <= 2k")
        side = min(ok, key=_side_key)
    else:
        raise AssertionError("cut refinement did not terminate")
    cut = Cut.from_side(base, side)
    if cut.order > 2 * k:
        raise AssertionError("small cut exceeds 2k")
    return cut


def check_small_cut(g: Multigraph | StubGraph, k: int, cut: Cut) -> bool:
    base = minus(g)
    if not cut.is_valid(base) or cut.order > 2 * k or not cut.side_a or not cut.side_b:
        return False
    if len(cut.side_a) == 1:
        return True
    sub = restrict(base, cut.side_a, stub_ids=()).graph
    return is_k_edge_connected(sub, k)


@dataclass(frozen=True)
class PeelStub:
    """A stub of the peeled host: global element id, position and origin."""

    id: int
    vertex: int
    index: int
    edge: int | None = None


@dataclass(frozen=True)
class PeelSequence:
    """Parts H_1..H_n with their cut sets C_1..C_n (C_n is empty).

    Vertices, edges and stubs keep the ids of the host.  Stubs created while
    peeling get ids after the host's own elements; ``stubs[sid].edge`` is the
    cut edge the stub stands for.
    """

    host: StubGraph
    k: int
    vertex_sets: tuple[frozenset[int], ...]
    part_edges: tuple[frozenset[int], ...]
    part_stubs: tuple[tuple[int, ...], ...]
    cut_edges: tuple[frozenset[int], ...]
    stubs: dict[int, PeelStub] = field(repr=False)
    residual_trace: tuple[dict, ...] = ()

    def __len__(self):
        return len(self.vertex_sets)

    @property
    def vertex_map(self) -> dict[int, tuple[int, int]]:
        out = {}
        for i, vs in enumerate(self.vertex_sets):
            for j, v in enumerate(sorted(vs)):
                out[v] = (i, j)
        return out

    def part(self, i: int) -> StubGraph:
        """H_{i+1} as a standalone stub graph (vertices renumbered in sorted order)."""
        vmap = {v: j for j, v in enumerate(sorted(self.vertex_sets[i]))}
        edges = tuple((vmap[u], vmap[v]) for u, v in (self.host.edges[e] for e in sorted(self.part_edges[i])))
        stubs = tuple((vmap[self.stubs[s].vertex], self.stubs[s].index) for s in self.part_stubs[i])
        return StubGraph.of(len(vmap), edges, stubs)

    @property
    def parts(self) -> list[StubGraph]:
        return [self.part(i) for i in range(len(self))]

    def stub_degree(self, i: int, v: int) -> int:
        """Degree of v inside H_{i+1} (edges plus stubs)."""
        d = sum(1 for e in self.part_edges[i] for x in self.host.edges[e] if x == v)
        return d + sum(1 for s in self.part_stubs[i] if self.stubs[s].vertex == v)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "parts": [
                {
                    "vertices": sorted(vs),
                    "edges": sorted(es),
                    "stubs": [
                        {"id": s, "vertex": self.stubs[s].vertex, "index": self.stubs[s].index, "edge": self.stubs[s].edge}
                        for s in st
                    ],
                    "cut_edges": sorted(c),
                }
                for vs, es, st, c in zip(self.vertex_sets, self.part_edges, self.part_stubs, self.cut_edges)
            ],
            "trace": list(self.residual_trace),
        }


def peel(g: Multigraph | StubGraph, k: int, prefer: str = "smaller") -> PeelSequence:
    """Repeatedly split off a k-edge-connected (or singleton) side of a small cut.

    Every edge of a cut C_i becomes a stub of index i at its endpoint on the
    remaining side; the edges of C_i stay recorded with H_i.
    """
    host = as_stub_graph(g)
    base = host.base
    if host.vertex_count == 0:
        raise GraphError("empty graph")
    offset = max((idx for _, idx in host.stubs), default=0)
    stubs = {s: PeelStub(s, *host.stub(s)) for s in host.stub_ids()}
    next_id = host.element_count
    current = frozenset(range(host.vertex_count))
    live = [s for s in host.stub_ids()]
    vertex_sets, part_edges, part_stubs, cut_edges, trace = [], [], [], [], []
    step = 0
    while current:
        step += 1
        sub = restrict(base, current, stub_ids=())
        inner = sub.graph.base
        trace.append(
            {
                "vertices": len(current),
                "edges": inner.edge_count,
                "stubs": len(live),
                "min_degree": min(inner.degree(x) + sum(1 for s in live if stubs[s].vertex == v)
                                  for v, x in sub.vertex_map.items()),
            }
        )
        if len(current) == 1 or is_k_edge_connected(inner, k):
            side = current
        else:
            cut = find_small_cut(inner, k, prefer)
            back = sub.inverse_vertices()
            side = frozenset(back[x] for x in cut.side_a)
        rest = current - side
        edges_in = frozenset(e for e, (u, v) in enumerate(base.edges) if u in side and v in side)
        crossing = frozenset(e for e, (u, v) in enumerate(base.edges)
                             if (u in side and v in rest) or (v in side and u in rest))
        vertex_sets.append(side)
        part_edges.append(edges_in)
        part_stubs.append(tuple(s for s in live if stubs[s].vertex in side))
        cut_edges.append(crossing)
        live = [s for s in live if stubs[s].vertex in rest]
        for e in sorted(crossing):
            u, v = base.edges[e]
            w = v if v in rest else u
            stubs[next_id] = PeelStub(next_id, w, offset + step, e)
            live.append(next_id)
            next_id += 1
        current = rest
    if step > host.vertex_count:
        raise AssertionError("peeling took more steps than vertices")
    return PeelSequence(
        host, k, tuple(vertex_sets), tuple(part_edges), tuple(part_stubs), tuple(cut_edges), stubs, tuple(trace)
    )
