"""Seeded host generators for tests, demos and the command line."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .connectivity import edge_connectivity
from .graph import Multigraph


class GeneratorError(ValueError):
    """Parameters that no graph of the requested kind can satisfy."""


def _simple(n: int, pairs) -> Multigraph:
    return Multigraph(n, tuple(sorted((min(u, v), max(u, v)) for u, v in pairs)))


def _fix_divisibility(n: int, present: set, modulus: int, pool_pairs) -> None:
    """Add the first missing pairs from ``pool_pairs`` until len(present) % modulus == 0."""
    if modulus <= 1:
        return
    need = (-len(present)) % modulus
    for p in pool_pairs:
        if need == 0:
            break
        if p not in present:
            present.add(p)
            need -= 1
    if need:
        raise GeneratorError(f"no room to reach an edge count divisible by {modulus}")


def random_min_degree(n: int, delta: int, seed: int, p: float = 0.0, modulus: int = 1) -> Multigraph:
    """Simple graph on n vertices with minimum degree >= delta."""
    if delta >= n:
        raise GeneratorError(f"minimum degree {delta} needs more than {n} vertices")
    rng = np.random.default_rng(seed)
    present: set[tuple[int, int]] = set()
    if p > 0:
        mask = rng.random((n, n)) < p
        present = {(u, v) for u, v in combinations(range(n), 2) if mask[u, v]}
    deg = [0] * n
    for u, v in present:
        deg[u] += 1
        deg[v] += 1
    for v in range(n):
        while deg[v] < delta:
            cand = [w for w in range(n) if w != v and (min(v, w), max(v, w)) not in present]
            w = min(cand, key=lambda x: (deg[x], rng.random()))
            present.add((min(v, w), max(v, w)))
            deg[v] += 1
            deg[w] += 1
    order = list(combinations(range(n), 2))
    rng.shuffle(order)
    _fix_divisibility(n, present, modulus, order)
    return _simple(n, present)


def clustered(
    sizes,
    seed: int,
    p: float = 0.8,
    bridges: int = 2,
    modulus: int = 1,
    part_moduli=None,
) -> tuple[Multigraph, list[list[int]]]:
    """Dense random clusters joined in a row by ``bridges`` random edges each.

    ``part_moduli`` optionally asks cluster i to satisfy
    (edges inside + bridges to earlier clusters) % part_moduli[i] == 0,
    which lets peeling-based constructions avoid large residue
    corrections on small clusters.  ``modulus`` fixes the total edge count
    (adjusting inside the largest cluster).  Returns the graph and the
    cluster vertex lists.
    """
    rng = np.random.default_rng(seed)
    clusters, start = [], 0
    for s in sizes:
        if s < 2:
            raise GeneratorError("clusters need at least two vertices")
        clusters.append(list(range(start, start + s)))
        start += s
    n = start
    inside: list[set] = []
    for cl in clusters:
        mask = rng.random((len(cl), len(cl))) < p
        pairs = {(cl[a], cl[b]) for a, b in combinations(range(len(cl)), 2) if mask[a, b]}
        # a Hamilton cycle keeps every cluster 2-edge-connected
        for a in range(len(cl)):
            x, y = cl[a], cl[(a + 1) % len(cl)]
            if x != y:
                pairs.add((min(x, y), max(x, y)))
        inside.append(pairs)
    links: list[set] = [set()]
    for a, b in zip(clusters, clusters[1:]):
        chosen = set()
        while len(chosen) < bridges:
            chosen.add((int(rng.choice(a)), int(rng.choice(b))))
        links.append(chosen)
    if part_moduli is not None:
        for i, mod in enumerate(part_moduli):
            if mod and mod > 1:
                extra = len(links[i])
                need = (-(len(inside[i]) + extra)) % mod
                cl = clusters[i]
                missing = [q for q in combinations(cl, 2) if q not in inside[i]]
                if len(missing) >= need:
                    inside[i].update(missing[:need])
                else:
                    # drop chord edges instead (never the Hamilton cycle)
                    cycle = {(min(cl[a], cl[(a + 1) % len(cl)]), max(cl[a], cl[(a + 1) % len(cl)])) for a in range(len(cl))}
                    drop = (len(inside[i]) + extra) % mod
                    chords = sorted(inside[i] - cycle)
                    if len(chords) < drop:
                        raise GeneratorError(f"cluster {i} cannot meet modulus {mod}")
                    inside[i].difference_update(chords[:drop])
    present = set().union(*inside, *links)
    big = max(range(len(clusters)), key=lambda i: len(clusters[i]))
    if modulus > 1 and part_moduli is not None and part_moduli[big] not in (None, 0, 1):
        raise GeneratorError("the largest cluster absorbs the total fix-up and cannot carry its own modulus")
    _fix_divisibility(n, present, modulus, combinations(clusters[big], 2))
    return _simple(n, present), clusters


def chain_host(count: int, size: int, seed: int, bridges: int = 1, modulus: int = 1) -> tuple[Multigraph, list[list[int]]]:
    """A row of ``count`` near-cliques joined by ``bridges`` edges: peels into many parts."""
    return clustered([size] * count, seed, p=0.9, bridges=bridges, modulus=modulus)


def properties(g: Multigraph, modulus: int | None = None) -> dict:
    """Certified facts about a generated host."""
    out = {
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "min_degree": min((g.degree(v) for v in range(g.vertex_count)), default=0),
        "edge_connectivity": edge_connectivity(g) if g.vertex_count > 1 else 0,
    }
    if modulus:
        out["edges_mod"] = g.edge_count % modulus
    return out


def gen_host(kind: str, seed: int, **params):
    """Dispatch by kind; returns (graph, metadata)."""
    if kind == "random-min-degree":
        g = random_min_degree(params["n"], params["delta"], seed, params.get("p", 0.0), params.get("modulus", 1))
        meta = {}
    elif kind == "clustered":
        g, cl = clustered(
            params["sizes"], seed, params.get("p", 0.8), params.get("bridges", 2), params.get("modulus", 1),
            params.get("part_moduli"),
        )
        meta = {"clusters": cl}
    elif kind == "chain-host":
        g, cl = chain_host(params["count"], params["size"], seed, params.get("bridges", 1), params.get("modulus", 1))
        meta = {"clusters": cl}
    elif kind == "blowup":
        from .counterexample import build_blowup

        g, s = build_blowup(params["f3"], params["k"], params["t"], params.get("residue", 0))
        meta = {"S": sorted(s)}
    else:
        raise GeneratorError(f"unknown generator kind {kind!r}")
    meta.update(properties(g, params.get("modulus")))
    meta.update(kind=kind, seed=seed)
    return g, meta
