import random

from hypothesis import given
from hypothesis import strategies as st

from forestdecomp.decomposition import verify
from forestdecomp.graph import Multigraph, StubGraph, canonical_shape, complete_graph, cycle_graph, path_graph, star_graph
from forestdecomp.search import Pool, TargetInfo, exact_decompose, find_copy, luby

from . import oracles
from .conftest import connected_multigraphs

P2 = canonical_shape(path_graph(2))
P3 = canonical_shape(path_graph(3))
CLAW = canonical_shape(star_graph(3))


def test_k4_examples():
    r = exact_decompose(complete_graph(4), [P3])
    assert r.ok and len(r.decomposition.parts) == 2 and verify(r.decomposition).ok
    assert exact_decompose(complete_graph(4), [CLAW]).status == "infeasible"


def test_single_stub_is_any_tree():
    for shape in (P2, P3, CLAW, canonical_shape(path_graph(1))):
        r = exact_decompose(StubGraph.of(1, [], [(0, 1)]), [shape])
        assert r.ok and verify(r.decomposition).ok


def test_stub_graph_with_edges():
    g = StubGraph.of(3, [(0, 1), (1, 2)], [(2, 1), (0, 2)])
    r = exact_decompose(g, [P2])
    assert r.ok
    assert verify(r.decomposition).ok


def test_loops_are_infeasible():
    g = Multigraph(2, [(0, 1), (1, 1)])
    assert exact_decompose(g, [canonical_shape(path_graph(1))]).status == "infeasible"


def test_count_constraints():
    c6 = cycle_graph(6)
    p1 = canonical_shape(path_graph(1))
    r = exact_decompose(c6, [P2, p1], exact_counts={0: 2})
    assert r.ok and r.decomposition.count(P2) == 2 and r.decomposition.count(p1) == 2
    # 3a + a = 6 has no solution, while C8 needs a = 2
    assert exact_decompose(c6, [P3, p1, P2], equal=[(0, 1)], exact_counts={2: 0}).status == "infeasible"
    r = exact_decompose(cycle_graph(8), [P3, p1], equal=[(0, 1)])
    assert r.ok and r.decomposition.count(P3) == r.decomposition.count(p1) == 2
    assert exact_decompose(c6, [P3], exact_counts={0: 1}).status == "infeasible"


def test_budget_status():
    g = complete_graph(9)
    r = exact_decompose(g, [canonical_shape(path_graph(4))], budget=5, unit=2)
    assert r.status in ("budget", "ok")
    assert r.status == "budget"


def test_luby_prefix():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


@given(connected_multigraphs(max_n=6, max_extra=5), st.sampled_from(["P2", "P3", "claw"]))
def test_agrees_with_exhaustive_enumeration(g, name):
    if g.edge_count > 10:
        return
    target = {"P2": path_graph(2), "P3": path_graph(3), "claw": star_graph(3)}[name]
    r = exact_decompose(g, [canonical_shape(target)], budget=None)
    truth = oracles.exhaustive_decomposable(g.vertex_count, g.edges, target.edges)
    assert r.status == ("ok" if truth else "infeasible")
    if r.ok:
        for part in r.decomposition.parts:
            assert oracles.part_matches(g.edges, part.edges, target.edges)


def test_find_copy_respects_pool():
    g = StubGraph(complete_graph(5))
    pool = Pool(g, available=range(g.edge_count))
    info = TargetInfo(canonical_shape(path_graph(4)))
    found = []
    while True:
        pl = find_copy(pool, info)
        if pl is None:
            break
        assert oracles.part_matches(g.edges, pl.edges, path_graph(4).edges)
        pool.take(pl.elements)
        found.append(pl.elements)
    assert len(found) >= 2
    assert len(set().union(*found)) == 4 * len(found)


def test_find_copy_on_random_dense_graph():
    rng = random.Random(5)
    n = 30
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
    g = StubGraph(Multigraph(n, edges))
    pool = Pool(g)
    info = TargetInfo(canonical_shape(path_graph(20)))
    pl = find_copy(pool, info)
    assert pl is not None and oracles.part_matches(g.edges, pl.edges, path_graph(20).edges)
