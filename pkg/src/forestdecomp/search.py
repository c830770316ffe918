"""Anchored tree-embedding search and the exact backtracking decomposer.

``Pool`` tracks which elements (edges and stubs) of a stub graph are still
available.  ``TargetInfo.grow`` enumerates embeddings of one target tree
from a partial placement; every other search in the package (exact
decomposition, greedy copy finding, twig realisation) is built from it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .decomposition import Decomposition, Embedding, Twig, verify
from .graph import GraphError, Multigraph, StubGraph, TreeShape, as_stub_graph, canonical_shape, is_tree


class BudgetExhausted(Exception):
    """The node budget ran out before the search finished."""


class Counter:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExhausted


class Pool:
    """Available elements of a stub graph with residual degrees."""

    def __init__(self, g: StubGraph, available: Iterable[int] | None = None):
        self.g = g
        n = g.vertex_count
        m = g.edge_count
        self.avail = bytearray(g.element_count)
        ids = range(g.element_count) if available is None else available
        for x in ids:
            self.avail[x] = 1
        self.inc_edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.inc_stubs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.loops = []
        for e, (u, v) in enumerate(g.edges):
            if u == v:
                self.loops.append(e)
                continue
            self.inc_edges[u].append((e, v))
            self.inc_edges[v].append((e, u))
        for j, (v, idx) in enumerate(g.stubs):
            self.inc_stubs[v].append((m + j, idx))
        self.edeg = [0] * n
        self.sdeg = [0] * n
        for v in range(n):
            self.edeg[v] = sum(1 for e, _ in self.inc_edges[v] if self.avail[e])
            self.sdeg[v] = sum(1 for s, _ in self.inc_stubs[v] if self.avail[s])
        self.remaining = sum(self.avail)

    def degree(self, v: int) -> int:
        return self.edeg[v] + self.sdeg[v]

    def take(self, elements: Iterable[int]) -> None:
        g = self.g
        m = g.edge_count
        for x in elements:
            if not self.avail[x]:
                raise ValueError(f"element {x} is not available")
            self.avail[x] = 0
            self.remaining -= 1
            if x < m:
                u, v = g.edges[x]
                if u != v:
                    self.edeg[u] -= 1
                    self.edeg[v] -= 1
            else:
                self.sdeg[g.stub(x)[0]] -= 1

    def give(self, elements: Iterable[int]) -> None:
        g = self.g
        m = g.edge_count
        for x in elements:
            assert not self.avail[x]
            self.avail[x] = 1
            self.remaining += 1
            if x < m:
                u, v = g.edges[x]
                if u != v:
                    self.edeg[u] += 1
                    self.edeg[v] += 1
            else:
                self.sdeg[g.stub(x)[0]] += 1

    def available(self) -> list[int]:
        return [x for x in range(len(self.avail)) if self.avail[x]]


@dataclass
class Placement:
    edges: frozenset[int]
    stubs: frozenset[int]
    twigs: dict[int, Twig]
    vmap: dict[int, int]

    @property
    def elements(self) -> frozenset[int]:
        return self.edges | self.stubs


class TargetInfo:
    """Precomputed branch codes, sibling symmetry and twigs of a target tree."""

    def __init__(self, shape: TreeShape):
        t = shape.graph
        if not is_tree(t) or t.edge_count == 0:
            raise GraphError("search targets must be proper trees")
        self.shape = shape
        self.tree = t
        self.size = t.edge_count
        n = t.vertex_count
        self.adj = [[] for _ in range(n)]
        for u, v in t.edges:
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.odd = sum(1 for v in range(n) if len(self.adj[v]) % 2)
        # branch[(x, y)]: code and vertex count of the y-side of edge xy
        self.branch: dict[tuple[int, int], str] = {}
        self.branch_size: dict[tuple[int, int], int] = {}
        for root in range(n):
            parent = {root: -1}
            order = [root]
            for x in order:
                for y in self.adj[x]:
                    if y != parent[x]:
                        parent[y] = x
                        order.append(y)
            codes, sizes = {}, {}
            for x in reversed(order):
                kids = [y for y in self.adj[x] if y != parent[x]]
                codes[x] = "(" + "".join(sorted(codes[y] for y in kids)) + ")"
                sizes[x] = 1 + sum(sizes[y] for y in kids)
            for x in order[1:]:
                key = (parent[x], x)
                if key not in self.branch:
                    self.branch[key] = codes[x]
                    self.branch_size[key] = sizes[x]
        self._children: dict[tuple[int, int], tuple[int, ...]] = {}
        self.prev_equal: dict[tuple[int, int, int], int] = {}
        self._twigs: dict[tuple[int, int], Twig] = {}
        types = {}
        for x, y in sorted(self.branch):
            key = (self.branch[(y, x)], self.branch[(x, y)])
            types.setdefault(key, (x, y))
        # smaller x-side first: the anchor vertex tends to end up near a leaf
        self.edge_types = sorted(types.values(), key=lambda xy: (self.branch_size[(xy[1], xy[0])], xy))
        self.stub_types = sorted(types.values(), key=lambda xy: (self.branch_size[xy], xy))

    def children(self, x: int, excl: int) -> tuple[int, ...]:
        key = (x, excl)
        if key not in self._children:
            kids = sorted((y for y in self.adj[x] if y != excl), key=lambda y: (self.branch[(x, y)], y))
            for a, b in zip(kids, kids[1:]):
                if self.branch[(x, a)] == self.branch[(x, b)]:
                    self.prev_equal[(excl, x, b)] = a
            self._children[key] = tuple(kids)
        return self._children[key]

    def twig(self, x: int, c: int) -> Twig:
        """Twig made of edge xc and the c-side, rooted at x (renumbered to 0)."""
        key = (x, c)
        if key not in self._twigs:
            label = {x: 0, c: 1}
            edges = [(0, 1)]
            stack = [(c, x)]
            while stack:
                y, py = stack.pop()
                for z in self.adj[y]:
                    if z != py:
                        label[z] = len(label)
                        edges.append((label[y], label[z]))
                        stack.append((z, y))
            self._twigs[key] = Twig(Multigraph(len(label), tuple(edges)), 0)
        return self._twigs[key]

    def grow(
        self,
        pool: Pool,
        vmap: dict[int, int],
        edges: list[int],
        stubs: list[int],
        twigs: dict[int, Twig],
        pending: list[tuple[int, int, int]],
        used_indices: set[int],
        counter: Counter,
        edge_key=None,
        allow_stubs: bool = True,
        stubs_first: bool = False,
    ) -> Iterator[Placement]:
        """Enumerate completions of a partial placement.

        ``pending`` holds (excl, x, c): target vertex c still has to be
        attached to the already placed x, where ``excl`` is the neighbour of
        x the children list of x was computed against.
        """
        used_vertices = set(vmap.values())
        chosen: dict[tuple[int, int], int] = {}
        g = pool.g
        avail = pool.avail

        def rec(i: int) -> Iterator[Placement]:
            if i == len(pending):
                yield Placement(frozenset(edges), frozenset(stubs), dict(twigs), dict(vmap))
                return
            excl, x, c = pending[i]
            w = vmap[x]
            prev = self.prev_equal.get((excl, x, c))
            lower = chosen[(x, prev)] if prev is not None else -1
            options = []
            for e, w2 in pool.inc_edges[w]:
                if e > lower and avail[e] and w2 not in used_vertices:
                    options.append((e, w2))
            if edge_key is not None:
                options.sort(key=lambda o: edge_key(o[1], o[0]))
            stub_opts = []
            if allow_stubs:
                for s, idx in pool.inc_stubs[w]:
                    if s > lower and avail[s] and idx not in used_indices:
                        stub_opts.append((s, idx))
            seq = ([("s", o) for o in stub_opts] + [("e", o) for o in options]) if stubs_first else (
                [("e", o) for o in options] + [("s", o) for o in stub_opts]
            )
            for kind, opt in seq:
                counter.tick()
                if kind == "e":
                    e, w2 = opt
                    if not avail[e] or w2 in used_vertices:
                        continue
                    vmap[c] = w2
                    used_vertices.add(w2)
                    edges.append(e)
                    chosen[(x, c)] = e
                    base = len(pending)
                    pending.extend((x, c, d) for d in self.children(c, x))
                    yield from rec(i + 1)
                    del pending[base:]
                    edges.pop()
                    used_vertices.discard(w2)
                    del vmap[c]
                    del chosen[(x, c)]
                else:
                    s, idx = opt
                    stubs.append(s)
                    twigs[s] = self.twig(x, c)
                    used_indices.add(idx)
                    chosen[(x, c)] = s
                    yield from rec(i + 1)
                    used_indices.discard(idx)
                    del twigs[s]
                    stubs.pop()
                    del chosen[(x, c)]

        yield from rec(0)

    def anchored(
        self, pool: Pool, anchor: int, counter: Counter, edge_key=None, used_indices=None, allow_stubs: bool = True
    ) -> Iterator[Placement]:
        """All placements (up to target automorphisms) containing ``anchor``."""
        g = pool.g
        base_indices = set(used_indices or ())
        if anchor < g.edge_count:
            p, q = g.edges[anchor]
            if p == q:
                return
            for x, y in self.edge_types:
                pending = [(y, x, c) for c in self.children(x, y)] + [(x, y, c) for c in self.children(y, x)]
                yield from self.grow(
                    pool, {x: p, y: q}, [anchor], [], {}, pending, set(base_indices), counter, edge_key, allow_stubs
                )
        else:
            v, idx = g.stub(anchor)
            if idx in base_indices:
                return
            for x, y in self.stub_types:
                pending = [(y, x, c) for c in self.children(x, y)]
                yield from self.grow(
                    pool, {x: v}, [], [anchor], {anchor: self.twig(x, y)}, pending, base_indices | {idx}, counter, edge_key,
                    allow_stubs,
                )


# ------------------------------------------------------------ exact search


@dataclass
class SearchResult:
    status: str  # "ok", "infeasible" or "budget"
    decomposition: Decomposition | None
    nodes: int

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _representable(sizes: Sequence[int], limit: int) -> bytearray:
    reach = bytearray(limit + 1)
    reach[0] = 1
    for x in range(1, limit + 1):
        for s in sizes:
            if s <= x and reach[x - s]:
                reach[x] = 1
                break
    return reach


class _Engine:
    def __init__(self, g: StubGraph, targets: Sequence[TreeShape], caps, equal, available=None):
        self.g = g
        self.infos = [TargetInfo(t) for t in targets]
        self.caps = caps
        self.equal = list(equal)
        self.pool = Pool(g, available)
        self.counts = [0] * len(targets)
        sizes = sorted({i.size for i in self.infos})
        self.min_size = sizes[0]
        self.max_odd = max(i.odd for i in self.infos)
        self.reach = _representable(sizes, g.edge_count)
        rng = random.Random(0x5EED)
        self.zkeys = [rng.getrandbits(64) for _ in range(g.element_count)]
        self.failed: set[tuple[int, tuple[int, ...]]] = set()
        self.batch = 24
        low = {0: 0.0, 1: 3.0, 2: 1.5}
        self.weights = lambda d: low.get(d, 0.0) + (d & 1)

    def score(self, pl: Placement) -> float:
        """Badness of the residual degrees after removing ``pl`` (lower is better)."""
        pool, g = self.pool, self.g
        loss: dict[int, int] = {}
        for e in pl.edges:
            u, v = g.edges[e]
            loss[u] = loss.get(u, 0) + 1
            loss[v] = loss.get(v, 0) + 1
        w = self.weights
        total = 0.0
        for v, l in loss.items():
            before, after = pool.edeg[v], pool.edeg[v] - l
            total += w(after) - w(before)
        return total

    def key(self, covered_hash: int):
        return (covered_hash, tuple(self.counts))

    def feasible_residual(self) -> bool:
        pool, g = self.pool, self.g
        n = g.vertex_count
        seen = bytearray(n)
        for s in range(n):
            if seen[s] or pool.degree(s) == 0:
                continue
            seen[s] = 1
            stack = [s]
            edges2 = stubs = odd = 0
            while stack:
                x = stack.pop()
                d = pool.edeg[x]
                edges2 += d
                stubs += pool.sdeg[x]
                odd += d & 1
                for e, y in pool.inc_edges[x]:
                    if pool.avail[e] and not seen[y]:
                        seen[y] = 1
                        stack.append(y)
            if stubs == 0:
                m = edges2 // 2
                if not self.reach[m]:
                    return False
                if odd > (m // self.min_size) * self.max_odd:
                    return False
        return True

    def pick_anchor(self, rng) -> int | None:
        pool = self.pool
        best, best_v = None, -1
        for v in range(self.g.vertex_count):
            d = pool.degree(v)
            if d and (best is None or d < best):
                best, best_v = d, v
        if best is None:
            return None
        for e, _ in sorted(pool.inc_edges[best_v]):
            if pool.avail[e]:
                return e
        for s, _ in pool.inc_stubs[best_v]:
            if pool.avail[s]:
                return s
        raise AssertionError("degree bookkeeping out of sync")

    def done(self) -> bool:
        if any(c is not None and self.counts[i] != c for i, c in self.caps.items()):
            return False
        return all(self.counts[a] == self.counts[b] for a, b in self.equal)

    def run(self, limit: int | None, rng: random.Random | None) -> tuple[str, list | None, int]:
        pool = self.pool
        counter = Counter(limit)
        if pool.loops and any(pool.avail[e] for e in pool.loops):
            return "infeasible", None, 0
        jitter = {}
        if rng is not None:
            jitter = {v: rng.random() for v in range(self.g.vertex_count)}

        def edge_key(w2, e):
            return (-pool.degree(w2), jitter.get(w2, 0.0), e)

        chosen: list[tuple[int, Placement]] = []
        frames: list[dict] = []
        zhash = 0
        for x in range(self.g.element_count):
            if not pool.avail[x]:
                zhash ^= self.zkeys[x]

        def open_frame() -> bool | None:
            anchor = self.pick_anchor(rng)
            if anchor is None:
                return True
            if self.key(zhash) in self.failed:
                return False
            gens = []
            for ti, info in enumerate(self.infos):
                cap = self.caps.get(ti)
                if cap is not None and self.counts[ti] >= cap:
                    continue
                gens.append((ti, info.anchored(pool, anchor, counter, edge_key)))
            frames.append(
                {"gens": gens, "gi": 0, "seen": set(), "applied": None, "key": self.key(zhash), "queue": None}
            )
            return None

        def pull(fr):
            while fr["gi"] < len(fr["gens"]):
                ti, gen = fr["gens"][fr["gi"]]
                for pl in gen:
                    tag = (ti, pl.elements)
                    if tag not in fr["seen"]:
                        fr["seen"].add(tag)
                        return ti, pl
                fr["gi"] += 1
            return None

        def next_child(fr):
            if fr["queue"] is None:
                batch = []
                while len(batch) < self.batch:
                    item = pull(fr)
                    if item is None:
                        break
                    batch.append(item)
                keyed = [(self.score(pl), rng.random() if rng else 0.0, i) for i, (_, pl) in enumerate(batch)]
                keyed.sort()
                fr["queue"] = [batch[i] for _, _, i in reversed(keyed)]
            if fr["queue"]:
                return fr["queue"].pop()
            return pull(fr)

        try:
            state = open_frame()
            if state is True:
                return ("ok", [], counter.nodes) if self.done() else ("infeasible", None, counter.nodes)
            while frames:
                fr = frames[-1]
                if fr["applied"] is not None:
                    ti, pl = fr["applied"]
                    pool.give(pl.elements)
                    for x in pl.elements:
                        zhash ^= self.zkeys[x]
                    self.counts[ti] -= 1
                    chosen.pop()
                    fr["applied"] = None
                nxt = next_child(fr)
                if nxt is None:
                    self.failed.add(fr["key"])
                    frames.pop()
                    continue
                ti, pl = nxt
                pool.take(pl.elements)
                for x in pl.elements:
                    zhash ^= self.zkeys[x]
                self.counts[ti] += 1
                chosen.append((ti, pl))
                fr["applied"] = (ti, pl)
                if not self.feasible_residual():
                    continue
                state = open_frame()
                if state is True:
                    if self.done():
                        return "ok", list(chosen), counter.nodes
                    continue
                if state is False:
                    continue
            return "infeasible", None, counter.nodes
        except BudgetExhausted:
            return "budget", None, counter.nodes
        finally:
            # leave the pool as found so another attempt can start afresh
            for ti, pl in chosen:
                pool.give(pl.elements)
                self.counts[ti] -= 1


def luby(i: int) -> int:
    """i-th term (1-based) of the Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


def exact_decompose(
    g,
    targets: Sequence[TreeShape],
    exact_counts: Mapping[int, int] | None = None,
    equal: Sequence[tuple[int, int]] = (),
    budget: int | None = 200_000,
    seed: int = 0,
    unit: int = 2_000,
) -> SearchResult:
    """Partition all edges and stubs of ``g`` into embeddings of the targets.

    ``exact_counts`` fixes the number of parts of some targets (by position
    in ``targets``); ``equal`` lists pairs of targets that must occur equally
    often.  Returns status "ok" with a verified decomposition, "infeasible"
    when the search space was exhausted, or "budget" when the node budget
    ran out first.

    The budget is spent on restarts whose lengths follow the Luby sequence
    times ``unit``; the first run is deterministic, later ones shuffle tie
    breaks with ``seed``.  Failed residual states are shared between runs,
    so any run that finishes without hitting its limit is a proof.
    """
    g = as_stub_graph(g)
    targets = list(targets)
    if not targets:
        raise ValueError("no targets")
    caps = dict(exact_counts or {})
    eng = _Engine(g, targets, caps, equal)
    total = 0
    a = 0
    while budget is None or total < budget:
        a += 1
        if budget is None:
            per = None
        else:
            per = min(unit * luby(a), budget - total)
        rng = None if a == 1 else random.Random(seed * 1_000_003 + a)
        status, chosen, nodes = eng.run(per, rng)
        total += nodes
        if status == "ok":
            parts = tuple(
                Embedding(targets[ti], pl.edges, pl.stubs, {s: pl.twigs[s] for s in pl.stubs}) for ti, pl in chosen
            )
            d = Decomposition(g, parts)
            verdict = verify(d)
            if not verdict:
                raise AssertionError(f"search produced an invalid decomposition: {verdict.message}")
            return SearchResult("ok", d, total)
        if status == "infeasible":
            return SearchResult("infeasible", None, total)
    return SearchResult("budget", None, total)


# ------------------------------------------------------- greedy copies


def find_copy(pool: Pool, info: TargetInfo, node_limit: int = 5_000, allow_stubs: bool = False) -> Placement | None:
    """First-fit copy of the target among available elements.

    Anchors are tried at vertices of minimum residual degree first (edges
    before stubs); backtracking is confined to the copy being built.
    """
    g = pool.g
    counter = Counter(node_limit)
    order = sorted((v for v in range(g.vertex_count) if pool.degree(v)), key=lambda v: (pool.degree(v), v))

    def edge_key(w2, e):
        # visit scarce vertices first, as in Warnsdorff's rule for long paths
        return (pool.degree(w2), e)

    try:
        for v in order:
            anchors = [e for e, _ in pool.inc_edges[v] if pool.avail[e]]
            if allow_stubs:
                anchors += [s for s, _ in pool.inc_stubs[v] if pool.avail[s]]
            for x in anchors:
                for pl in info.anchored(pool, x, counter, edge_key, allow_stubs=allow_stubs):
                    return pl
    except BudgetExhausted:
        return None
    return None
