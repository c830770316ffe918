"""Balanced orientations, low-degree spanning trees and degree-budget splits."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .connectivity import is_k_edge_connected, pack_spanning_trees
from .graph import GraphError, Multigraph, StubGraph, as_stub_graph, degrees_in, minus, spanning_subgraph


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Orientation:
    """``arcs[e] = (tail, head)`` for every edge id of ``graph``."""

    graph: Multigraph
    arcs: tuple[tuple[int, int], ...]

    def out_degrees(self) -> list[int]:
        out = [0] * self.graph.vertex_count
        for t, _ in self.arcs:
            out[t] += 1
        return out

    def in_degrees(self) -> list[int]:
        ind = [0] * self.graph.vertex_count
        for _, h in self.arcs:
            ind[h] += 1
        return ind

    def is_balanced(self) -> bool:
        return all(abs(o - i) <= 1 for o, i in zip(self.out_degrees(), self.in_degrees()))

    def reachable(self, source: int, reverse: bool = False) -> set[int]:
        succ: list[list[int]] = [[] for _ in range(self.graph.vertex_count)]
        for t, h in self.arcs:
            if reverse:
                succ[h].append(t)
            else:
                succ[t].append(h)
        seen = {source}
        stack = [source]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def is_strongly_connected(self) -> bool:
        n = self.graph.vertex_count
        if n <= 1:
            return True
        return len(self.reachable(0)) == n and len(self.reachable(0, reverse=True)) == n


def euler_balanced_arcs(n: int, edges) -> list[tuple[int, int]]:
    """Orientation with |out - in| <= 1 everywhere (no connectivity claim).

    Odd-degree vertices are joined to a dummy vertex and every component is
    oriented along an Euler circuit.
    """
    dummy = n
    all_edges = list(edges)
    deg = [0] * (n + 1)
    for u, v in all_edges:
        deg[u] += 1
        deg[v] += 1
    real = len(all_edges)
    for v in range(n):
        if deg[v] % 2:
            all_edges.append((v, dummy))
    inc: list[list[int]] = [[] for _ in range(n + 1)]
    for i, (u, v) in enumerate(all_edges):
        inc[u].append(i)
        inc[v].append(i)
    used = [False] * len(all_edges)
    ptr = [0] * (n + 1)
    arcs: list[tuple[int, int] | None] = [None] * len(all_edges)
    for start in range(n + 1):
        # Hierholzer; each traversed edge is oriented in walking direction
        stack = [start]
        while stack:
            x = stack[-1]
            while ptr[x] < len(inc[x]) and used[inc[x][ptr[x]]]:
                ptr[x] += 1
            if ptr[x] == len(inc[x]):
                stack.pop()
                continue
            e = inc[x][ptr[x]]
            used[e] = True
            u, v = all_edges[e]
            y = v if u == x else u
            arcs[e] = (x, y)
            stack.append(y)
    return [arcs[i] for i in range(real)]


def _chain_decomposition(g: Multigraph) -> list[list[tuple[int, int, int]]]:
    """Schmidt chains as walks [(edge, from, to), ...]; raises on a bridge."""
    n = g.vertex_count
    pre = [-1] * n
    parent_edge = [-1] * n
    order: list[int] = []
    pre[0] = 0
    order.append(0)
    stack = [(0, iter(g.incidence[0]))]
    while stack:
        x, it = stack[-1]
        for e in it:
            if e == parent_edge[x]:
                continue
            y = g.other(e, x)
            if pre[y] < 0:
                pre[y] = len(order)
                order.append(y)
                parent_edge[y] = e
                stack.append((y, iter(g.incidence[y])))
                break
        else:
            stack.pop()
    if len(order) != n:
        raise PreconditionError("graph is disconnected")
    tree = {e for e in parent_edge if e >= 0}
    visited = [False] * n
    covered: set[int] = set()
    chains = []
    for v in order:
        for e in g.incidence[v]:
            if e in tree or e in covered:
                continue
            a, b = g.edges[e]
            if a == b:
                covered.add(e)
                chains.append([(e, v, v)])
                continue
            w = g.other(e, v)
            if pre[w] < pre[v]:
                continue
            if not visited[v] and v != order[0]:
                raise PreconditionError("graph has a bridge")
            visited[v] = True
            covered.add(e)
            walk = [(e, v, w)]
            x = w
            while not visited[x]:
                visited[x] = True
                pe = parent_edge[x]
                p = g.other(pe, x)
                covered.add(pe)
                walk.append((pe, x, p))
                x = p
            chains.append(walk)
    if len(covered) != g.edge_count:
        raise PreconditionError("graph has a bridge")
    return chains


def balanced_strong_orientation(g: Multigraph | StubGraph) -> Orientation:
    """Strongly connected orientation with |out - in| <= 1 at every vertex.

    Every ear of a chain decomposition is oriented as a directed path; the
    direction of each open ear comes from a balanced orientation of the
    multigraph whose edges join ear endpoints.
    """
    g = minus(g)
    if g.vertex_count == 1:
        return Orientation(g, tuple((u, v) for u, v in g.edges))
    if g.vertex_count == 0:
        raise PreconditionError("empty graph")
    chains = _chain_decomposition(g)
    open_ears = [c for c in chains if c[0][1] != c[-1][2]]
    ear_dirs = euler_balanced_arcs(g.vertex_count, [(c[0][1], c[-1][2]) for c in open_ears])
    arcs: list[tuple[int, int] | None] = [None] * g.edge_count
    forward = {id(c): True for c in chains}
    for c, (t, _) in zip(open_ears, ear_dirs):
        forward[id(c)] = t == c[0][1]
    for c in chains:
        for e, a, b in c:
            arcs[e] = (a, b) if forward[id(c)] else (b, a)
    out = Orientation(g, tuple(arcs))
    if not (out.is_balanced() and out.is_strongly_connected()):
        raise AssertionError("orientation failed its own check")
    return out


def out_branching(o: Orientation, root: int = 0) -> frozenset[int]:
    g = o.graph
    out_arcs: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e, (t, h) in enumerate(o.arcs):
        if t != h:
            out_arcs[t].append(e)
    seen = {root}
    tree = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for e in out_arcs[x]:
            y = o.arcs[e][1]
            if y not in seen:
                seen.add(y)
                tree.append(e)
                queue.append(y)
    if len(seen) != g.vertex_count:
        raise PreconditionError("orientation is not strongly connected")
    return frozenset(tree)


def satisfies_half_bound(g: Multigraph, tree) -> bool:
    """deg_T(v) <= (deg_G(v) + 3) / 2 for every vertex."""
    dt = degrees_in(g, tree)
    return all(2 * dt[v] <= g.degree(v) + 3 for v in range(g.vertex_count))


def low_degree_spanning_tree(g: Multigraph | StubGraph) -> frozenset[int]:
    """Spanning tree with deg_T(v) <= (deg_G(v)+3)/2 in a 2-edge-connected graph."""
    g = minus(g)
    if not is_k_edge_connected(g, 2, single_vertex=True):
        raise PreconditionError("graph is not 2-edge-connected")
    tree = out_branching(balanced_strong_orientation(g))
    assert satisfies_half_bound(g, tree)
    return tree


def _halve(g: Multigraph, trees: list[frozenset[int]]) -> frozenset[int]:
    """Pairwise-merge 2^p edge-disjoint spanning trees down to one."""
    while len(trees) > 1:
        merged = []
        for a, b in zip(trees[0::2], trees[1::2]):
            sub, ids = spanning_subgraph(g, a | b)
            t = low_degree_spanning_tree(sub)
            merged.append(frozenset(ids[e] for e in t))
        trees = merged
    return trees[0]


def satisfies_power_bound(g: Multigraph, tree, p: int, base_degrees=None) -> bool:
    """deg_T(v) <= deg(v)/2^p + 3p/2, checked in integers."""
    dt = degrees_in(g, tree)
    dg = base_degrees or [g.degree(v) for v in range(g.vertex_count)]
    return all(2 ** (p + 1) * dt[v] <= 2 * dg[v] + 3 * p * 2**p for v in range(g.vertex_count))


def halving_spanning_tree(g: Multigraph | StubGraph, p: int) -> frozenset[int]:
    """Spanning tree with deg_T(v) <= deg_G(v)/2^p + 3p/2 given 2^p disjoint spanning trees."""
    g = minus(g)
    if p < 0:
        raise ValueError("p must be non-negative")
    pack = pack_spanning_trees(g, 2**p)
    if not pack.feasible:
        raise PreconditionError(f"graph has no {2**p} edge-disjoint spanning trees")
    tree = _halve(g, list(pack.trees))
    if not satisfies_power_bound(g, tree, p):
        raise AssertionError("halving bound violated")
    return tree


def _log2_ceil(x: Fraction) -> int:
    q = 0
    while 2**q < x:
        q += 1
    return q


def degree_threshold(eps, m: int) -> int:
    """Smallest L with 3 * 2^m * (ceil(log2(1/eps)) + 1) <= eps * L / 2."""
    eps = Fraction(eps)
    q = _log2_ceil(1 / eps)
    return math.ceil(Fraction(6 * 2**m * (q + 1)) / eps)


def sparse_tree_family(g: Multigraph | StubGraph, eps, m: int) -> list[frozenset[int]]:
    """2^m edge-disjoint spanning trees whose degrees sum to at most eps*deg(v)."""
    g = as_stub_graph(g)
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    q = _log2_ceil(1 / eps)
    n = 2 + m + q
    if not is_k_edge_connected(g, 2**n):
        raise PreconditionError(f"graph is not {2**n}-edge-connected")
    L = degree_threshold(eps, m)
    if g.min_degree() < L:
        raise PreconditionError(f"minimum degree {g.min_degree()} is below {L}")
    return _family(g, eps, m, q + 1)


def _family(g: StubGraph, eps: Fraction, m: int, group_log: int) -> list[frozenset[int]]:
    base = g.base
    group = 2**group_log
    pack = pack_spanning_trees(base, 2**m * group)
    if not pack.feasible:
        raise PreconditionError(f"no {2**m * group} edge-disjoint spanning trees")
    trees = list(pack.trees)
    family = [_halve(base, trees[i * group : (i + 1) * group]) for i in range(2**m)]
    total = [0] * g.vertex_count
    for t in family:
        for v, d in enumerate(degrees_in(base, t)):
            total[v] += d
    if any(total[v] > eps * g.degree(v) for v in range(g.vertex_count)):
        raise PreconditionError("summed tree degrees exceed eps * deg")
    return family


@dataclass(frozen=True)
class SplitResult:
    """Spanning ``core`` edges plus everything else (``rest`` edges and all stubs)."""

    core: frozenset[int]
    rest: frozenset[int]
    k0: int
    delta0: int

    def rest_degrees(self, g: StubGraph) -> list[int]:
        g = as_stub_graph(g)
        deg = [len(g.stub_incidence[v]) for v in range(g.vertex_count)]
        for e in self.rest:
            if e < g.edge_count:
                u, v = g.edges[e]
                deg[u] += 1
                deg[v] += 1
        return deg


def check_split(g: StubGraph, split: SplitResult) -> str | None:
    """None when both split invariants hold, else a message."""
    g = as_stub_graph(g)
    edges = frozenset(range(g.edge_count))
    if split.core & split.rest or (split.core | (split.rest & edges)) != edges:
        return "core and rest do not partition the edges"
    if not set(g.stub_ids()) <= split.rest:
        return "a stub is missing from rest"
    if g.vertex_count > 1:
        sub, _ = spanning_subgraph(g.base, split.core)
        if not is_k_edge_connected(sub, split.k0):
            return f"core is not {split.k0}-edge-connected"
    deg = split.rest_degrees(g)
    if deg and min(deg) < split.delta0 and g.vertex_count > 1:
        return f"rest has minimum degree {min(deg)} < {split.delta0}"
    return None


def split_core_rest(g: Multigraph | StubGraph, k0: int, delta0: int, strict: bool = True) -> SplitResult:
    """Split into a k0-edge-connected spanning graph and a stub graph of min degree >= delta0.

    ``strict`` enforces the connectivity and degree thresholds up front.
    Otherwise the largest feasible tree-group size is used and only the
    output invariants are enforced.
    """
    g = as_stub_graph(g)
    everything = frozenset(range(g.element_count))
    if g.vertex_count <= 1:
        return SplitResult(frozenset(), everything, k0, delta0)
    m = _log2_ceil(Fraction(k0))
    if strict:
        if not is_k_edge_connected(g, 16 * k0):
            raise PreconditionError(f"graph is not {16 * k0}-edge-connected")
        d0 = max(2 * delta0, degree_threshold(Fraction(1, 2), m))
        if g.min_degree() < d0:
            raise PreconditionError(f"minimum degree {g.min_degree()} is below d0 = {d0}")
        family = _family(g, Fraction(1, 2), m, 2)
    else:
        family = None
        for group_log in (2, 1, 0):
            try:
                family = _family(g, Fraction(1), m, group_log)
                break
            except PreconditionError:
                continue
        if family is None:
            raise PreconditionError(f"graph has no {2**m} edge-disjoint spanning trees")
    core = frozenset().union(*family[:k0])
    split = SplitResult(core, everything - core, k0, delta0)
    problem = check_split(g, split)
    if problem:
        if strict:
            raise AssertionError(problem)
        raise PreconditionError(problem)
    return split
