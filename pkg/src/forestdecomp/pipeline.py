"""Decomposition constructions built on the exact search.

* ``extend_from_minus``: cover leftover stubs by one-stub parts.
* ``decompose_two_coprime``: a few greedy copies of one tree fix the
  residue, a core decomposer handles the rest.
* ``expand_stub_embedding``: realise the twig of one stub inside a reservoir.
* ``pipeline_three_trees``: peel, then walk the parts backwards keeping the
  two auxiliary trees balanced, finishing with a Bezout step.
* ``assemble_forest`` / ``decompose_forest``: turn the tree decomposition
  into a decomposition into copies of a coprime forest.

Outputs are always checked with ``verify`` before they are returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .chains import ChainParameters, ChainTree, bezout_small, forest_chain_parameters
from .decomposition import Decomposition, Embedding, Twig, twig_of, verify
from .graph import (
    GraphError,
    Multigraph,
    StubGraph,
    TreeShape,
    as_stub_graph,
    canonical_shape,
    minus,
    relabel,
    restrict,
    tree_isomorphism,
)
from .peeling import peel
from .search import BudgetExhausted, Counter, Pool, SearchResult, TargetInfo, exact_decompose, find_copy
from .sparse_trees import PreconditionError, split_core_rest


class PipelineError(RuntimeError):
    """A construction stage failed; ``stage`` names it, ``snapshot`` describes the instance."""

    def __init__(self, stage: str, message: str, snapshot: Mapping | None = None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.snapshot = dict(snapshot or {})


class BudgetExceeded(PipelineError):
    """A search gave up before reaching a verdict (not a proof of infeasibility)."""


class Infeasible(PipelineError):
    """A search proved that the requested decomposition does not exist."""


CoreDecomposer = Callable[[StubGraph, Sequence[TreeShape]], SearchResult]


@dataclass
class ExactCore:
    """Stand-in for the high-connectivity decomposition theorem: exact search."""

    budget: int | None = 200_000
    seed: int = 0
    unit: int = 2_000

    def __call__(self, g: StubGraph, targets: Sequence[TreeShape], exact_counts=None) -> SearchResult:
        return exact_decompose(g, targets, exact_counts, budget=self.budget, seed=self.seed, unit=self.unit)


def _leaf_twig(shape: TreeShape) -> Twig:
    t = shape.graph
    leaf = min(v for v in range(t.vertex_count) if t.degree(v) == 1)
    return twig_of(t, leaf)


def _checked(d: Decomposition, stage: str) -> Decomposition:
    verdict = verify(d)
    if not verdict:
        raise AssertionError(f"{stage} produced an invalid decomposition: {verdict.message}")
    return d


def extend_from_minus(d_minus: Decomposition, g: StubGraph | Multigraph, filler: TreeShape) -> Decomposition:
    """Add every stub of ``g`` as its own part, expanded to a whole copy of ``filler``."""
    g = as_stub_graph(g)
    verdict = verify(d_minus)
    if not verdict:
        raise ValueError(f"decomposition of the stub-free part is invalid: {verdict.message}")
    if d_minus.host.base != minus(g):
        raise ValueError("decomposition does not belong to the stub-free projection of g")
    if not filler.is_tree or not filler.is_proper:
        raise GraphError("filler must be a proper tree")
    twig = _leaf_twig(filler)
    parts = list(d_minus.parts)
    parts.extend(Embedding(filler, frozenset(), frozenset([s]), {s: twig}) for s in g.stub_ids())
    return _checked(Decomposition(g, tuple(parts)), "extend_from_minus")


# ------------------------------------------------------------ sub-hosts


def _subhost(g: StubGraph, elements) -> tuple[StubGraph, dict[int, int]]:
    """Stub graph on the given elements (all vertices kept) and the id map back to g."""
    m = g.edge_count
    edges = [x for x in elements if x < m]
    stubs = [x for x in elements if x >= m]
    r = restrict(g, range(g.vertex_count), edge_ids=edges, stub_ids=stubs)
    return r.graph, r.inverse_elements()


def _lift(parts: Sequence[Embedding], back: Mapping[int, int]) -> list[Embedding]:
    out = []
    for p in parts:
        out.append(
            Embedding(
                p.target,
                frozenset(back[e] for e in p.edges),
                frozenset(back[s] for s in p.stubs),
                {back[s]: tw for s, tw in p.twigs.items()},
            )
        )
    return out


def _run_core(core, g: StubGraph, elements, targets, stage: str, snapshot=None) -> list[Embedding]:
    elements = sorted(elements)
    if not elements:
        return []
    sub, back = _subhost(g, elements)
    res = core(sub, list(targets))
    snap = {"elements": len(elements), "nodes": res.nodes, **(snapshot or {})}
    if res.status == "budget":
        raise BudgetExceeded(stage, "core decomposer ran out of budget", snap)
    if res.status != "ok":
        raise Infeasible(stage, "core decomposer proved the remainder infeasible", snap)
    return _lift(res.decomposition.parts, back)


def _greedy_copies(pool: Pool, shape: TreeShape, count: int, limit: int, stage: str) -> list[Embedding]:
    info = TargetInfo(shape)
    out = []
    for i in range(count):
        pl = find_copy(pool, info, node_limit=limit, allow_stubs=True)
        if pl is None:
            raise BudgetExceeded(stage, f"greedy search found only {i} of {count} copies", {"target_edges": shape.edge_count})
        pool.take(pl.elements)
        out.append(Embedding(shape, pl.edges, pl.stubs, {s: pl.twigs[s] for s in pl.stubs}))
    return out


def residue_copies(total: int, a: int, b: int) -> int:
    """Least n >= 0 with total - n*b divisible by a (needs gcd(a, b) = 1)."""
    if a == 1:
        return 0
    return (total * pow(b, -1, a)) % a


def decompose_two_coprime(
    g: StubGraph | Multigraph,
    t1: TreeShape,
    t2: TreeShape,
    core: CoreDecomposer | None = None,
    copy_limit: int = 20_000,
) -> Decomposition:
    """{t1, t2}-decomposition with fewer than |E(t1)| copies of t2."""
    g = as_stub_graph(g)
    core = core or ExactCore()
    parts = _two_coprime_parts(g, range(g.element_count), t1, t2, core, copy_limit, "two-coprime")
    return _checked(Decomposition(g, tuple(parts)), "decompose_two_coprime")


def _two_coprime_parts(g: StubGraph, elements, t1: TreeShape, t2: TreeShape, core, copy_limit: int, stage: str):
    a, b = t1.edge_count, t2.edge_count
    if math.gcd(a, b) != 1:
        raise PreconditionError(f"|E(t1)| = {a} and |E(t2)| = {b} are not coprime")
    elements = list(elements)
    n = residue_copies(len(elements), a, b)
    if n * b > len(elements):
        raise PipelineError(stage, f"{len(elements)} elements cannot hold {n} copies of t2")
    pool = Pool(g, elements)
    copies = _greedy_copies(pool, t2, n, copy_limit, stage + "/greedy")
    rest = pool.available()
    return copies + _run_core(core, g, rest, [t1], stage + "/core", {"copies_t2": n})


# ---------------------------------------------------- stub expansion


def expand_stub_embedding(
    k_emb: Embedding,
    stub: int,
    host: StubGraph,
    reservoir: Pool,
    bridge_edge: int,
    forbidden_indices=(),
    node_limit: int = 20_000,
) -> Embedding:
    """Replace ``stub`` of ``k_emb`` by a realisation of its twig.

    The twig root sits at the stub's vertex v, the bridge edge uv is the
    twig's root edge and the rest of the twig is drawn from ``reservoir``
    (whose elements are consumed).  Stubs picked from the reservoir avoid
    ``forbidden_indices`` and each other's indices.
    """
    if stub not in k_emb.stubs:
        raise ValueError(f"stub {stub} is not part of the embedding")
    v, _ = host.stub(stub)
    a, b = host.edges[bridge_edge]
    if v not in (a, b) or a == b:
        raise ValueError("bridge edge must join the stub's vertex to another vertex")
    u = b if a == v else a
    twig = k_emb.twigs[stub]
    t = twig.tree
    info = TargetInfo(canonical_shape(t))
    root = twig.root
    c = t.other(t.incidence[root][0], root)
    counter = Counter(node_limit)
    pending = [(root, c, d) for d in info.children(c, root)]
    gen = info.grow(reservoir, {root: v, c: u}, [bridge_edge], [], {}, pending, set(forbidden_indices), counter)
    try:
        pl = next(gen, None)
    except BudgetExhausted:
        pl = None
    if pl is None:
        raise BudgetExceeded(
            "expand", f"could not realise a twig with {t.edge_count} edges from vertex {v}", {"stub": stub}
        )
    reservoir.take(pl.elements - {bridge_edge})
    twigs = {s: tw for s, tw in k_emb.twigs.items() if s != stub}
    twigs.update(pl.twigs)
    return Embedding(k_emb.target, k_emb.edges | pl.edges, (k_emb.stubs - {stub}) | pl.stubs, twigs)


# --------------------------------------------------------- the pipeline


@dataclass
class PipelineConfig:
    """Desk-scale stand-ins for the thresholds of the existence proofs."""

    k: int = 4
    delta: int = 0
    core: CoreDecomposer = field(default_factory=ExactCore)
    split_k0: int = 1
    split_delta: int = 0
    copy_limit: int = 20_000
    prefer: str = "larger"


def balancing_counts(elements: int, a: int, a1: int, a2: int, diff: int) -> tuple[int, int, bool]:
    """Extra copies (x1, x2) of T1, T2 making the counts equal and the rest divisible by a.

    ``diff`` is #T2 - #T1 so far.  The third value reports whether the
    instance is above the Bezout bound (c > a*b) where the solution is
    guaranteed; below it the smallest solution is searched directly.
    """
    b = a1 + a2
    if diff >= 0:
        c, base1, base2 = elements - a1 * diff, diff, 0
    else:
        c, base1, base2 = elements - a2 * (-diff), 0, -diff
    if c > a * b:
        cert = bezout_small(a, b, c)
        return base1 + cert.k_b, base2 + cert.k_b, True
    for tp in range(a):
        rest = c - tp * b
        if rest < 0:
            break
        if rest % a == 0:
            return base1 + tp, base2 + tp, False
    raise PipelineError("final", f"no balancing solution for {elements} elements", {"diff": diff})


def pipeline_three_trees(
    g: StubGraph | Multigraph,
    t: TreeShape,
    t1: TreeShape,
    t2: TreeShape,
    config: PipelineConfig | None = None,
    report: dict | None = None,
) -> Decomposition:
    """{t, t1, t2}-decomposition with as many copies of t1 as of t2."""
    cfg = config or PipelineConfig()
    g = as_stub_graph(g)
    a, a1, a2 = t.edge_count, t1.edge_count, t2.edge_count
    if math.gcd(a, a1) != 1 or math.gcd(a, a2) != 1:
        raise PreconditionError("|E(t)| must be coprime with |E(t1)| and |E(t2)|")
    gd = math.gcd(a, a1 + a2)
    if g.element_count % gd:
        raise PreconditionError(f"{g.element_count} elements are not divisible by gcd(|E(t)|, |E(t1)|+|E(t2)|) = {gd}")
    if g.vertex_count and g.min_degree() < cfg.delta:
        raise PreconditionError(f"minimum degree {g.min_degree()} is below {cfg.delta}")
    rep = report if report is not None else {}
    shapes = (t, t1, t2)

    seq = peel(g, cfg.k, cfg.prefer)
    m = g.edge_count
    all_stubs = [(s.vertex, s.index) for _, s in sorted(seq.stubs.items())]
    work = StubGraph(g.base, tuple(all_stubs))
    offset = max((idx for _, idx in g.stubs), default=0)
    parts_n = len(seq)
    rep.update(parts=parts_n, steps=[], stubs_created=len(all_stubs) - len(g.stubs))

    emb: list[Embedding] = []
    c1 = c2 = 0
    for i in range(parts_n, 0, -1):
        ii = i - 1
        index = offset + i
        elements = set(seq.part_edges[ii]) | set(seq.part_stubs[ii])
        step = {"part": i, "vertices": len(seq.vertex_sets[ii]), "elements": len(elements)}
        pending = [(j, s) for j, p in enumerate(emb) for s in sorted(p.stubs) if work.stub(s)[1] == index]
        need_reservoir = bool(pending) or i == 1
        reservoir_ids = set()
        if need_reservoir:
            reservoir_ids = _reservoir(work, seq.vertex_sets[ii], seq.part_edges[ii], seq.part_stubs[ii], cfg)
        pool = Pool(work, reservoir_ids)
        for j, s in pending:
            others = {work.stub(x)[1] for x in emb[j].stubs if x != s}
            bridge = seq.stubs[s].edge
            emb[j] = expand_stub_embedding(emb[j], s, work, pool, bridge, others, cfg.copy_limit)
        consumed = reservoir_ids - set(pool.available())
        remaining = elements - consumed
        step["expanded"] = len(pending)
        step["consumed"] = len(consumed)
        if i > 1:
            jj = 1 if c1 < c2 else 2
            new = _two_coprime_parts(work, remaining, t, shapes[jj], cfg.core, cfg.copy_limit, f"part {i}")
            added = sum(1 for p in new if p.target == shapes[jj])
            if jj == 1:
                c1 += added
            else:
                c2 += added
            step.update(j=jj, copies=added)
            emb.extend(new)
            if abs(c1 - c2) > a:
                raise AssertionError(f"balance lost after part {i}: {c1} vs {c2}")
        else:
            x1, x2, above = balancing_counts(len(remaining), a, a1, a2, c2 - c1)
            step.update(extra_t1=x1, extra_t2=x2, above_bezout_bound=above)
            res_pool = Pool(work, reservoir_ids & remaining)
            extra = _greedy_copies(res_pool, t1, x1, cfg.copy_limit, "final/greedy")
            extra += _greedy_copies(res_pool, t2, x2, cfg.copy_limit, "final/greedy")
            used = set().union(*(p.elements for p in extra)) if extra else set()
            c1 += x1
            c2 += x2
            emb.extend(extra)
            emb.extend(_run_core(cfg.core, work, remaining - used, [t], "final/core"))
        step["balance"] = (c1, c2)
        rep["steps"].append(step)
    if c1 != c2:
        raise AssertionError("final counts of t1 and t2 differ")
    for p in emb:
        if any(s >= g.element_count for s in p.stubs):
            raise AssertionError("an auxiliary stub survived the backward pass")
    rep["counts"] = {"t": sum(1 for p in emb if p.target == t), "t1": c1, "t2": c2}
    return _checked(Decomposition(g, tuple(emb)), "pipeline_three_trees")


def _reservoir(work: StubGraph, vertices, edges, stubs, cfg: PipelineConfig) -> set[int]:
    """Reservoir R_i: the part minus a sparse connected core (all of it for a singleton)."""
    r = restrict(work, vertices, edge_ids=edges, stub_ids=stubs)
    back = r.inverse_elements()
    try:
        split = split_core_rest(r.graph, cfg.split_k0, cfg.split_delta, strict=False)
    except PreconditionError:
        return set(back.values())
    return {back[x] for x in split.rest}


# ---------------------------------------------------- forest assembly


def _transport(part: Embedding, host: StubGraph, ct: ChainTree) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Edge and vertex sets in the host of every constituent of a chain tree."""
    if part.stubs:
        raise ValueError("forest assembly needs stub-free parts")
    ids = sorted(part.edges)
    sub, label = relabel([host.edges[e] for e in ids])
    iso = tree_isomorphism(ct.tree, sub)
    if iso is None:
        raise AssertionError("part is not isomorphic to its chain tree")
    inv = {v: k for k, v in label.items()}
    lookup = {frozenset(host.edges[e]): e for e in ids}
    out = []
    for p in ct.parts:
        es = frozenset(lookup[frozenset((inv[iso[x]], inv[iso[y]]))] for x, y in (ct.tree.edges[e] for e in p))
        vs = frozenset(x for e in es for x in host.edges[e])
        out.append((es, vs))
    return out


def _pair_copies(pieces1, pieces2, s: int, greedy_rounds: int) -> list[list[int]]:
    """Group the constituent copies of one T1/T2 pair into vertex-disjoint forests.

    ``piecesX`` are lists of (component, edges, vertices).  Returns groups
    of indices into pieces1 + pieces2.
    """
    both = list(pieces1) + list(pieces2)
    off = len(pieces1)
    unused = [
        [[i for i, p in enumerate(pieces1) if p[0] == j] for j in range(s)],
        [[off + i for i, p in enumerate(pieces2) if p[0] == j] for j in range(s)],
    ]
    groups: list[list[int]] = []
    for _ in range(greedy_rounds):
        chosen: list[int] = []
        taken: set[int] = set()
        for j in range(s):
            side = 0 if len(unused[0][j]) >= len(unused[1][j]) else 1
            pick = next((x for x in unused[side][j] if not (both[x][2] & taken)), None)
            if pick is None:
                raise AssertionError("no vertex-disjoint component copy left in the greedy phase")
            unused[side][j].remove(pick)
            chosen.append(pick)
            taken |= both[pick][2]
        groups.append(chosen)
    for side in (0, 1):
        pool = unused[side]
        if len({len(x) for x in pool}) != 1:
            raise AssertionError("leftover collections are not balanced")
        flat = [x for lst in pool for x in lst]
        bad = set()
        for x in flat:
            for y in flat:
                if both[x][0] != both[y][0] and both[x][2] & both[y][2]:
                    bad.add(x)
        while any(x in bad for lst in pool for x in lst):
            b = next(x for lst in pool for x in lst if x in bad)
            jb = both[b][0]
            group = [b]
            pool[jb].remove(b)
            for j in range(s):
                if j == jb:
                    continue
                g = next((x for x in pool[j] if x not in bad), None)
                if g is None:
                    raise AssertionError("ran out of good copies while using up bad ones")
                pool[j].remove(g)
                group.append(g)
            groups.append(group)
        while pool[0]:
            groups.append([pool[j].pop(0) for j in range(s)])
    return groups


def assemble_forest(d: Decomposition, params: ChainParameters) -> Decomposition:
    """F-decomposition from a verified {T, T1, T2}-decomposition built from ``params``."""
    verdict = verify(d)
    if not verdict:
        raise ValueError(f"input decomposition is invalid: {verdict.message}")
    host = d.host
    f_shape = canonical_shape(params.forest)
    s = len(params.components)
    shapes = {"t": params.t.shape(), "t1": params.t1.shape(), "t2": params.t2.shape()}
    by = {key: [p for p in d.parts if p.target == sh] for key, sh in shapes.items()}
    if sum(len(v) for v in by.values()) != len(d.parts):
        raise ValueError("decomposition contains parts that are not T, T1 or T2")
    if len(by["t1"]) != len(by["t2"]):
        raise ValueError("numbers of T1 and T2 parts differ")
    out: list[Embedding] = []
    for part in by["t"]:
        pieces = _transport(part, host, params.t)
        for grp in params.t.groups:
            out.append(Embedding(f_shape, frozenset().union(*(pieces[i][0] for i in grp))))
    nv = params.forest.vertex_count
    rounds = params.m - 4 * nv
    for p1, p2 in zip(by["t1"], by["t2"]):
        x1 = [(k, es, vs) for k, (es, vs) in zip(params.t1.kinds, _transport(p1, host, params.t1))]
        x2 = [(k, es, vs) for k, (es, vs) in zip(params.t2.kinds, _transport(p2, host, params.t2))]
        both = x1 + x2
        for grp in _pair_copies(x1, x2, s, rounds):
            out.append(Embedding(f_shape, frozenset().union(*(both[i][1] for i in grp))))
    return _checked(Decomposition(host, tuple(out)), "assemble_forest")


def decompose_forest(
    g: Multigraph | StubGraph,
    f: Multigraph,
    minimal: bool = True,
    config: PipelineConfig | None = None,
    report: dict | None = None,
) -> Decomposition:
    """F-decomposition of g for a proper coprime forest F."""
    g = as_stub_graph(g)
    if g.stubs:
        raise GraphError("forest decomposition is defined for graphs without stubs")
    f_shape = canonical_shape(f)
    if not f_shape.is_proper:
        raise GraphError("forest must be proper")
    if math.gcd(*f_shape.component_sizes) != 1:
        raise ValueError(f"forest is not coprime: component sizes {list(f_shape.component_sizes)}")
    if g.edge_count % f.edge_count:
        raise PreconditionError(f"{g.edge_count} edges are not divisible by |E(F)| = {f.edge_count}")
    rep = report if report is not None else {}
    if f.edge_count == 1:
        rep["mode"] = "single-edge"
        return _checked(Decomposition(g, tuple(Embedding(f_shape, frozenset([e])) for e in range(g.edge_count))), "decompose_forest")
    params = forest_chain_parameters(f, minimal=minimal)
    rep["chain"] = params.summary()
    d = pipeline_three_trees(g, params.t.shape(), params.t1.shape(), params.t2.shape(), config, rep)
    return assemble_forest(d, params)
