"""Chains of trees, k-chains of forests, and Bezout arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .graph import GraphError, Multigraph, TreeShape, canonical_shape, is_forest, is_tree


@dataclass(frozen=True)
class ChainTree:
    """A tree glued leaf-to-leaf from constituents.

    ``parts[i]`` holds the edge ids of the i-th constituent and ``kinds[i]``
    its label (the component index for chains of forests).  ``groups``, when
    present, lists the part indices forming each copy of the forest the
    chain was built from.
    """

    tree: Multigraph
    seams: tuple[int, ...]
    parts: tuple[frozenset[int], ...]
    kinds: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...] = ()

    @property
    def edge_count(self) -> int:
        return self.tree.edge_count

    def shape(self) -> TreeShape:
        return canonical_shape(self.tree)

    def part_vertices(self, i: int) -> frozenset[int]:
        return frozenset(x for e in self.parts[i] for x in self.tree.edges[e])


def _leaves(t: Multigraph) -> list[int]:
    return [v for v in range(t.vertex_count) if t.degree(v) == 1]


def chain(trees: Sequence[Multigraph], kinds: Sequence[int] | None = None) -> ChainTree:
    """T_1 o T_2 o ... o T_k: the lowest-id leaf u_i of T_i is glued to the
    highest-id leaf v_{i+1} of T_{i+1}."""
    if not trees:
        raise GraphError("a chain needs at least one tree")
    kinds = tuple(range(len(trees))) if kinds is None else tuple(kinds)
    edges: list[tuple[int, int]] = []
    parts = []
    seams = []
    count = 0
    prev_u = None
    for t in trees:
        if not is_tree(t) or t.edge_count == 0:
            raise GraphError("every constituent must be a tree with at least one edge")
        leaves = _leaves(t)
        u, v = leaves[0], leaves[-1]
        local = {}
        for x in range(t.vertex_count):
            if prev_u is not None and x == v:
                local[x] = prev_u
            else:
                local[x] = count
                count += 1
        if prev_u is not None:
            seams.append(prev_u)
        start = len(edges)
        edges.extend((local[a], local[b]) for a, b in t.edges)
        parts.append(frozenset(range(start, len(edges))))
        prev_u = local[u]
    tree = Multigraph(count, tuple(edges))
    return ChainTree(tree, tuple(seams), tuple(parts), kinds)


def forest_components(f: Multigraph) -> list[Multigraph]:
    """Components of a forest as standalone trees, ordered by (size, canonical code)."""
    if not is_forest(f):
        raise GraphError("not a forest")
    comps = []
    for comp in f.components():
        index = {v: i for i, v in enumerate(comp)}
        edges = tuple((index[u], index[v]) for u, v in f.edges if u in index)
        comps.append(Multigraph(len(comp), edges))
    comps.sort(key=lambda t: (t.edge_count, canonical_shape(t).canonical))
    return comps


def _check_proper(comps: Sequence[Multigraph]) -> None:
    if not comps or any(c.edge_count == 0 for c in comps):
        raise GraphError("forest is not proper (a component has no edges)")


def chain_of_counts(comps: Sequence[Multigraph], counts: Sequence[int]) -> ChainTree:
    """K_1^{o c_1} o ... o K_s^{o c_s}."""
    seq, kinds = [], []
    for j, (c, cnt) in enumerate(zip(comps, counts)):
        if cnt < 0:
            raise ValueError("negative multiplicity")
        seq.extend([c] * cnt)
        kinds.extend([j] * cnt)
    return chain(seq, kinds)


def k_chain_forest(f: Multigraph, k: int) -> ChainTree:
    """The k-chain of a proper forest with its decomposition into k copies of f."""
    if k < 2:
        raise ValueError("k must be at least 2")
    comps = forest_components(f)
    _check_proper(comps)
    ct = chain_of_counts(comps, [k] * len(comps))
    s = len(comps)
    # copy c takes the c-th copy of every component; positions differ by k >= 2
    groups = tuple(tuple(j * k + c for j in range(s)) for c in range(k))
    return ChainTree(ct.tree, ct.seams, ct.parts, ct.kinds, groups)


# ------------------------------------------------------------- arithmetic


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def bezout_coefficients(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd and integer coefficients p with sum(p_i * values_i) = gcd, folding left."""
    if not values:
        raise ValueError("empty sequence")
    g, coefs = values[0], [1]
    for v in values[1:]:
        g2, x, y = extended_gcd(g, v)
        coefs = [c * x for c in coefs] + [y]
        g = g2
    if g < 0:
        g, coefs = -g, [-c for c in coefs]
    return g, coefs


@dataclass(frozen=True)
class BezoutCertificate:
    a: int
    b: int
    c: int
    k_a: int
    k_b: int

    def is_valid(self) -> bool:
        return self.k_a >= 0 and 0 <= self.k_b < self.a and self.k_a * self.a + self.k_b * self.b == self.c


def bezout_small(a: int, b: int, c: int) -> BezoutCertificate:
    """Non-negative k_a, k_b with k_b < a and k_a*a + k_b*b = c (needs c > ab, gcd | c).

    k_b is the smallest admissible value.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if c <= a * b:
        raise ValueError(f"c = {c} must exceed a*b = {a * b}")
    d, x, y = extended_gcd(a, b)
    if c % d:
        raise ValueError(f"c = {c} is not divisible by gcd(a, b) = {d}")
    k_b = (y * (c // d)) % (a // d)
    k_a = (c - k_b * b) // a
    cert = BezoutCertificate(a, b, c, k_a, k_b)
    assert cert.is_valid()
    return cert


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def next_prime_above(n: int) -> int:
    q = n + 1
    while not is_prime(q):
        q += 1
    return q


@dataclass(frozen=True)
class ChainParameters:
    """The three chain trees used to decompose into a coprime forest.

    ``t1`` has n|E(F)|+1 edges, ``t2`` has m|E(F)|-|E(t1)| edges and
    ``t`` is the r-chain of the forest itself.
    """

    forest: Multigraph
    components: tuple[Multigraph, ...]
    p: tuple[int, ...]
    n: int
    m: int
    r: int
    t1: ChainTree
    t2: ChainTree
    t: ChainTree
    minimal: bool

    @property
    def counts1(self) -> tuple[int, ...]:
        return tuple(self.n + pj for pj in self.p)

    @property
    def counts2(self) -> tuple[int, ...]:
        return tuple(self.m - (self.n + pj) for pj in self.p)

    def summary(self) -> dict:
        return {
            "p": list(self.p),
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "edges_t1": self.t1.edge_count,
            "edges_t2": self.t2.edge_count,
            "edges_t": self.t.edge_count,
            "mode": "minimal" if self.minimal else "strict",
        }


def forest_chain_parameters(
    f: Multigraph,
    minimal: bool = False,
    n: int | None = None,
    m: int | None = None,
    r: int | None = None,
) -> ChainParameters:
    """Chain trees T1, T2 and T = F^{o r} for a proper coprime forest F.

    Strict mode uses the textbook sizes (r prime).  Minimal mode defaults to
    the smallest n, m admitted by the 2|V(F)| bounds and the smallest r >= 2
    coprime to everything it has to be; explicit n, m, r overrides are
    allowed there and validated the same way.
    """
    comps = forest_components(f)
    _check_proper(comps)
    sizes = [c.edge_count for c in comps]
    g, p = bezout_coefficients(sizes)
    if g != 1:
        raise ValueError(f"forest is not coprime: component sizes {sizes} share the factor {g}")
    ef = sum(sizes)
    nv = f.vertex_count
    if not minimal and (n, m, r) != (None, None, None):
        raise ValueError("n, m, r overrides need minimal mode")
    if n is None:
        n = 2 * nv - min([0, *p]) if not minimal else 2 * nv - min(p)
    if m is None:
        m = 2 * nv + n + max([0, *p]) if not minimal else 2 * nv + n + max(p)
    counts1 = [n + pj for pj in p]
    counts2 = [m - c for c in counts1]
    for c1, c2 in zip(counts1, counts2):
        if c1 < 2 * nv or c2 < 2 * nv:
            raise ValueError(f"n + p_j and m - (n + p_j) must be at least 2|V(F)| = {2 * nv}")
    e1 = sum(c * s for c, s in zip(counts1, sizes))
    e2 = m * ef - e1
    assert e1 == n * ef + 1
    if r is None:
        if minimal:
            r = 2
            while not (math.gcd(r * ef, e1) == 1 and math.gcd(r * ef, e2) == 1 and math.gcd(r, m) == 1):
                r += 1
        else:
            r = next_prime_above(max(e1, e2))
    if r < 2:
        raise ValueError("r must be at least 2")
    if not minimal and not is_prime(r):
        raise ValueError("strict mode needs r prime")
    checks = {
        "gcd(|E(T1)|, |E(F)|) = 1": math.gcd(e1, ef) == 1,
        "gcd(|E(T2)|, |E(F)|) = 1": math.gcd(e2, ef) == 1,
        "gcd(|E(T)|, |E(T1)|) = 1": math.gcd(r * ef, e1) == 1,
        "gcd(|E(T)|, |E(T2)|) = 1": math.gcd(r * ef, e2) == 1,
        "gcd(r, m) = 1": math.gcd(r, m) == 1,
    }
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise ValueError("parameter validation failed: " + ", ".join(failed))
    t1 = chain_of_counts(comps, counts1)
    t2 = chain_of_counts(comps, counts2)
    t = k_chain_forest(f, r)
    return ChainParameters(f, tuple(comps), tuple(p), n, m, r, t1, t2, t, minimal)


def lcm_all(values: Sequence[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)
