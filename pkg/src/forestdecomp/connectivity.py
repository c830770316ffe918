"""Global minimum cuts and edge-disjoint spanning-tree packing.

All connectivity notions on stub graphs are evaluated on the stub-free
projection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Cut, GraphError, Multigraph, StubGraph, minus


def _weight_matrix(g: Multigraph) -> np.ndarray:
    w = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
    for u, v in g.edges:
        if u != v:
            w[u, v] += 1
            w[v, u] += 1
    return w


def global_min_cut(g: Multigraph | StubGraph) -> Cut:
    """Minimum cut by Stoer-Wagner maximum-adjacency contraction.

    A disconnected graph gets the order-0 cut separating the component of
    vertex 0 from the rest.
    """
    g = minus(g)
    n = g.vertex_count
    if n < 2:
        raise GraphError("a cut needs at least two vertices")
    comps = g.components()
    if len(comps) > 1:
        return Cut.from_side(g, comps[0])

    w = _weight_matrix(g)
    groups: list[list[int]] = [[v] for v in range(n)]
    alive = list(range(n))
    best_order, best_side = None, None
    while len(alive) > 1:
        idx = np.array(alive)
        sub = w[np.ix_(idx, idx)]
        added = np.zeros(len(alive), dtype=bool)
        conn = np.zeros(len(alive), dtype=np.int64)
        prev = last = 0
        added[0] = True
        conn += sub[0]
        for _ in range(len(alive) - 1):
            masked = np.where(added, -1, conn)
            nxt = int(np.argmax(masked))
            prev, last = last, nxt
            added[nxt] = True
            conn += sub[nxt]
        cut_of_phase = int(sub[last].sum())
        s, t = alive[prev], alive[last]
        if best_order is None or cut_of_phase < best_order:
            best_order, best_side = cut_of_phase, list(groups[t])
        # merge t into s
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0
        w[t, :] = 0
        w[:, t] = 0
        groups[s].extend(groups[t])
        alive.remove(t)
    side = set(best_side)
    if len(side) * 2 > n or (len(side) * 2 == n and 0 not in side):
        side = set(range(n)) - side
    cut = Cut.from_side(g, side)
    assert cut.order == best_order
    return cut


def edge_connectivity(g: Multigraph | StubGraph) -> int:
    g = minus(g)
    if g.vertex_count < 2:
        raise GraphError("edge connectivity needs at least two vertices")
    return global_min_cut(g).order


def is_k_edge_connected(g: Multigraph | StubGraph, k: int, single_vertex: bool = False) -> bool:
    """True iff the stub-free graph has >= 2 vertices and every cut has order >= k.

    With ``single_vertex=True`` a one-vertex graph also counts as
    k-edge-connected.
    """
    g = minus(g)
    n = g.vertex_count
    if n == 0:
        return False
    if n == 1:
        return single_vertex
    if k <= 0:
        return True
    for v in range(n):
        # loops never cross a cut
        if sum(1 for e in g.incidence[v] if g.edges[e][0] != g.edges[e][1]) < k:
            return False
    return global_min_cut(g).order >= k


# ------------------------------------------------------------ tree packing


@dataclass(frozen=True)
class TreePack:
    """k forests of the host; a feasible pack has k edge-disjoint spanning trees.

    When infeasible, ``certificate`` is a vertex partition with fewer than
    ``k * (len(certificate) - 1)`` edges between its classes.
    """

    trees: tuple[frozenset[int], ...]
    vertex_count: int
    certificate: tuple[frozenset[int], ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.certificate is None

    def to_json(self) -> list[list[int]]:
        return [sorted(t) for t in self.trees]


class _Forests:
    def __init__(self, g: Multigraph, k: int):
        self.g = g
        self.k = k
        self.adj = [[set() for _ in range(g.vertex_count)] for _ in range(k)]
        self.owner = [-1] * g.edge_count

    def path(self, i: int, s: int, t: int) -> list[int] | None:
        if s == t:
            return []
        adj = self.adj[i]
        via = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in adj[x]:
                y = self.g.other(e, x)
                if y not in via:
                    via[y] = e
                    if y == t:
                        out = []
                        while y != s:
                            e = via[y]
                            out.append(e)
                            y = self.g.other(e, y)
                        return out
                    queue.append(y)
        return None

    def move(self, e: int, target: int) -> None:
        u, v = self.g.edges[e]
        old = self.owner[e]
        if old >= 0:
            self.adj[old][u].discard(e)
            self.adj[old][v].discard(e)
        if target >= 0:
            self.adj[target][u].add(e)
            self.adj[target][v].add(e)
        self.owner[e] = target

    def search(self, roots: list[int], augment: bool = True):
        """BFS over the exchange graph; returns (augmented, labelled set)."""
        labels: dict[int, int | None] = {e: None for e in roots}
        queue = deque(roots)
        while queue:
            f = queue.popleft()
            u, v = self.g.edges[f]
            for i in range(self.k):
                if self.owner[f] == i:
                    continue
                path = self.path(i, u, v)
                if path is None:
                    if augment:
                        cur, tgt = f, i
                        while cur is not None:
                            old = self.owner[cur]
                            self.move(cur, tgt)
                            tgt, cur = old, labels[cur]
                        return True, labels
                    continue
                for h in path:
                    if h not in labels:
                        labels[h] = f
                        queue.append(h)
        return False, labels


def pack_spanning_trees(g: Multigraph | StubGraph, k: int) -> TreePack:
    """k edge-disjoint spanning trees via matroid-union augmentation.

    Returns a TreePack whose ``certificate`` is set (a partition violating
    the Nash-Williams/Tutte count) when no such packing exists.
    """
    g = minus(g)
    if k < 1:
        raise ValueError("k must be positive")
    n = g.vertex_count
    forests = _Forests(g, k)
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        forests.search([e])
    trees = tuple(frozenset(e for e in range(g.edge_count) if forests.owner[e] == i) for i in range(k))
    if all(len(t) == max(n - 1, 0) for t in trees):
        return TreePack(trees, n)

    unused = [e for e in range(g.edge_count) if forests.owner[e] < 0 and g.edges[e][0] != g.edges[e][1]]
    found, labels = forests.search(unused, augment=False)
    assert not found
    parts = tuple(frozenset(c) for c in g.components(labels.keys()))
    crossing = sum(1 for u, v in g.edges if _class_of(parts, u) != _class_of(parts, v))
    if not crossing < k * (len(parts) - 1):
        raise AssertionError("packing certificate failed its own check")
    return TreePack(trees, n, parts)


def _class_of(parts, v):
    for i, p in enumerate(parts):
        if v in p:
            return i
    raise KeyError(v)


def check_tree_pack(g: Multigraph | StubGraph, pack: TreePack, k: int) -> bool:
    from .graph import is_spanning_tree

    g = minus(g)
    if len(pack.trees) != k:
        return False
    seen: set[int] = set()
    for t in pack.trees:
        if seen & t or not is_spanning_tree(g, t):
            return False
        seen |= t
    return True
