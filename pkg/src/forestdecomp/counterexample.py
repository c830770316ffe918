"""Graphs of high connectivity and minimum degree with no T_k-decomposition.

T_k is the complete binary tree of depth k.  Deleting one edge of T_k
leaves components whose sizes lie in a small set; when the sizes of f3
such pieces cannot sum to a chosen residue m modulo |E(T_k)|, gluing two
blow-ups with f3 far-apart matching edges yields a counterexample whose
edge count is still divisible by |E(T_k)|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .connectivity import edge_connectivity
from .graph import GraphError, Multigraph, bfs_distances, canonical_shape, disjoint_union, is_tree


def binary_tree(k: int) -> Multigraph:
    """Complete binary tree of depth k (heap numbering, root 0)."""
    if k < 1:
        raise ValueError("depth must be at least 1")
    n = 2 ** (k + 1) - 1
    return Multigraph(n, tuple(((v - 1) // 2, v) for v in range(1, n)))


def edge_total(k: int) -> int:
    return 2 ** (k + 1) - 2


def split_sizes(t: Multigraph) -> frozenset[int]:
    """Edge counts of the components left by deleting a single edge."""
    if not is_tree(t):
        raise GraphError("split sizes are defined for trees")
    out = set()
    total = t.edge_count
    for e, (u, v) in enumerate(t.edges):
        rest = [i for i in range(total) if i != e]
        # edges on u's side: BFS from u without e
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for i in t.incidence[x]:
                if i == e:
                    continue
                y = t.other(i, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        side = sum(1 for i in rest if t.edges[i][0] in seen)
        out.update((side, total - 1 - side))
    return frozenset(out)


def closed_form_sizes(k: int) -> frozenset[int]:
    return frozenset({2**i - 2 for i in range(1, k + 1)} | {2 ** (k + 1) - 2**i - 1 for i in range(1, k + 1)})


def smallest_growth_depth(f3: int) -> int:
    """Least k with (2k)^f3 < n_k (the inequality then holds for every larger k)."""
    if f3 < 1:
        raise ValueError("f3 must be positive")
    k = 1
    while (2 * k) ** f3 >= edge_total(k):
        k += 1
    return k


def attainable_sums(values, count: int, modulus: int) -> frozenset[int]:
    """Residues of sums of ``count`` values (with repetition) modulo ``modulus``."""
    reach = {0}
    vals = {v % modulus for v in values}
    for _ in range(count):
        reach = {(r + v) % modulus for r in reach for v in vals}
    return frozenset(reach)


@dataclass(frozen=True)
class ResidueProfile:
    k: int
    n_k: int
    t_set: tuple[int, ...]
    f3: int
    attainable: frozenset[int]
    missing: int | None

    @property
    def status(self) -> str:
        return "ok" if self.missing is not None else "none"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n_k": self.n_k,
            "t_set": list(self.t_set),
            "f3": self.f3,
            "attainable_count": len(self.attainable),
            "missing": self.missing,
            "status": self.status,
            "smallest_growth_depth": smallest_growth_depth(self.f3),
        }


def residue_profile(k: int, f3: int) -> ResidueProfile:
    """Split sizes of T_k, residues reachable by f3 of them and the smallest missing m in [n_k]."""
    if f3 < 1:
        raise ValueError("f3 must be positive")
    n_k = edge_total(k)
    sizes = split_sizes(binary_tree(k))
    if len(sizes) > 2 * k:
        raise AssertionError("more split sizes than the counting bound allows")
    reach = attainable_sums(sizes, f3, n_k)
    if len(reach) > min(n_k, (2 * k) ** f3):
        raise AssertionError("more attainable residues than the counting bound allows")
    missing = next((m for m in range(1, n_k + 1) if m % n_k not in reach), None)
    return ResidueProfile(k, n_k, tuple(sorted(sizes)), f3, reach, missing)


# --------------------------------------------------------------- blow-up


@dataclass(frozen=True)
class Blowup:
    graph: Multigraph
    S: frozenset[int]
    classes: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        # unpacks as (graph, S)
        return iter((self.graph, self.S))


def build_blowup(f3: int, k: int, t: int, target_residue: int) -> Blowup:
    """Blown-up subdivided star with |E| = target_residue (mod n_k).

    The star has f3 edges, each subdivided k times; every vertex becomes a
    class of t vertices and every edge a complete bipartite graph.  Edges
    inside the centre class fix the residue (lexicographically).  S takes
    the first vertex of every leaf class.
    """
    if f3 < 1 or k < 1:
        raise ValueError("f3 and k must be positive")
    if t < 2:
        raise ValueError("t must be at least 2 to leave room for adjustment edges")
    n_k = edge_total(k)
    arm = k + 1
    # class 0 is the centre; class 1 + j*arm + (p-1) is position p on arm j
    count = 1 + f3 * arm
    classes = tuple(tuple(range(c * t, (c + 1) * t)) for c in range(count))
    star = []
    for j in range(f3):
        prev = 0
        for p in range(1, arm + 1):
            cur = 1 + j * arm + (p - 1)
            star.append((prev, cur))
            prev = cur
    edges = [(x, y) for a, b in star for x in classes[a] for y in classes[b]]
    need = (target_residue - len(edges)) % n_k
    room = list(combinations(classes[0], 2))
    if need > len(room):
        raise ValueError(f"residue needs {need} extra edges but a class of {t} vertices holds only {len(room)}")
    edges.extend(room[:need])
    g = Multigraph(count * t, tuple(edges))
    s = frozenset(classes[1 + j * arm + (arm - 1)][0] for j in range(f3))
    assert g.edge_count % n_k == target_residue % n_k
    dist = s_distance(g, s)
    if f3 > 1 and dist < 2 * k + 2:
        raise AssertionError(f"S vertices are only {dist} apart")
    meta = {
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "residue": g.edge_count % n_k,
        "min_degree": min(g.degree(v) for v in range(g.vertex_count)),
        "edge_connectivity": edge_connectivity(g),
        "s_distance": dist,
    }
    return Blowup(g, s, classes, meta)


def s_distance(g: Multigraph, s) -> float:
    """Smallest distance between two distinct vertices of s (inf if |s| < 2)."""
    s = sorted(s)
    best = float("inf")
    for i, a in enumerate(s):
        d = bfs_distances(g, a)
        for b in s[i + 1 :]:
            best = min(best, d[b])
    return best


@dataclass(frozen=True)
class Counterexample:
    graph: Multigraph
    k: int
    f3: int
    g1_vertices: frozenset[int]
    g2_vertices: frozenset[int]
    s1: tuple[int, ...]
    s2: tuple[int, ...]
    matching: tuple[int, ...]
    g1_edges: int
    g2_edges: int


def assemble_counterexample(g1: Multigraph, s1, g2: Multigraph, s2, f3: int, k: int) -> Counterexample:
    """Disjoint union of g1 and g2 plus a matching between s1 and s2 (paired in sorted order)."""
    s1, s2 = tuple(sorted(s1)), tuple(sorted(s2))
    if len(s1) != f3 or len(s2) != f3:
        raise ValueError(f"both S sets need exactly f3 = {f3} vertices")
    n_k = edge_total(k)
    if (g1.edge_count + g2.edge_count + f3) % n_k:
        raise ValueError(
            f"residues do not add up: {g1.edge_count} + {g2.edge_count} + {f3} is not divisible by {n_k}"
        )
    base = disjoint_union([g1, g2])
    off = g1.vertex_count
    match = [(a, off + b) for a, b in zip(s1, s2)]
    graph = Multigraph(base.vertex_count, base.edges + tuple(match))
    ids = tuple(range(base.edge_count, graph.edge_count))
    assert graph.edge_count % n_k == 0
    return Counterexample(
        graph,
        k,
        f3,
        frozenset(range(off)),
        frozenset(range(off, base.vertex_count)),
        s1,
        tuple(off + b for b in s2),
        ids,
        g1.edge_count,
        g2.edge_count,
    )


@dataclass
class ObstructionReport:
    issued: bool
    premises: dict[str, bool]
    details: dict
    search: str | None = None

    def to_json(self) -> dict:
        return {"issued": self.issued, "premises": self.premises, "details": self.details, "search": self.search}


def certify_obstruction(profile: ResidueProfile, cx: Counterexample, search_budget: int | None = None) -> ObstructionReport:
    """Check every premise of the residue counting argument.

    The certificate is issued only when all premises hold: then no
    T_k-decomposition exists, because each copy of T_k meets at most one
    matching edge and leaves a size from the split-size set in G1.
    ``search_budget`` additionally runs the exact search (toy sizes only).
    """
    k, f3, n_k = cx.k, cx.f3, edge_total(cx.k)
    sub1 = _side(cx.graph, cx.g1_vertices, cx.matching)
    sub2 = _side(cx.graph, cx.g2_vertices, cx.matching)
    d1 = s_distance(sub1, cx.s1)
    d2 = s_distance(sub2, cx.s2)
    tree_sizes = split_sizes(binary_tree(k))
    brute = frozenset(sum(c) % n_k for c in _multisets(sorted(tree_sizes), f3)) if f3 <= 3 else None
    premises = {
        "profile matches the instance": profile.k == k and profile.f3 == f3,
        "split sizes recomputed": frozenset(profile.t_set) == tree_sizes,
        "missing residue exists": profile.missing is not None,
        "missing residue unattainable": profile.missing is not None
        and profile.missing % n_k not in attainable_sums(tree_sizes, f3, n_k)
        and (brute is None or profile.missing % n_k not in brute),
        "G1 edge count has the missing residue": profile.missing is not None and cx.g1_edges % n_k == profile.missing % n_k,
        "total edge count divisible by n_k": cx.graph.edge_count % n_k == 0,
        "matching has f3 edges": len(cx.matching) == f3,
        "S1 pairwise distance >= 2k+2": d1 >= 2 * k + 2,
        "S2 pairwise distance >= 2k+2": d2 >= 2 * k + 2,
    }
    details = {
        "k": k,
        "f3": f3,
        "n_k": n_k,
        "missing": profile.missing,
        "g1_edges": cx.g1_edges,
        "g2_edges": cx.g2_edges,
        "edges": cx.graph.edge_count,
        "s1_distance": d1 if d1 != float("inf") else None,
        "s2_distance": d2 if d2 != float("inf") else None,
        "min_degree": min(cx.graph.degree(v) for v in range(cx.graph.vertex_count)),
        "edge_connectivity": edge_connectivity(cx.graph),
    }
    report = ObstructionReport(all(premises.values()), premises, details)
    if search_budget is not None:
        from .search import exact_decompose

        res = exact_decompose(cx.graph, [canonical_shape(binary_tree(k))], budget=search_budget)
        report.search = res.status
        if report.issued and res.status == "ok":
            raise AssertionError("exact search decomposed a certified counterexample")
    return report


def _side(g: Multigraph, vertices: frozenset[int], drop) -> Multigraph:
    """g with every edge outside ``vertices`` (and the matching) removed; vertex ids kept."""
    drop = set(drop)
    return Multigraph(
        g.vertex_count,
        tuple((u, v) for i, (u, v) in enumerate(g.edges) if i not in drop and u in vertices and v in vertices),
    )


def _multisets(values, count):
    if count == 0:
        yield ()
        return
    for i, v in enumerate(values):
        for rest in _multisets(values[i:], count - 1):
            yield (v,) + rest
