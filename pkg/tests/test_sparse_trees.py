import random
from fractions import Fraction

import pytest
from hypothesis import given

from forestdecomp.connectivity import is_k_edge_connected, pack_spanning_trees
from forestdecomp.graph import Multigraph, StubGraph, complete_graph, cycle_graph, degrees_in, spanning_subgraph
from forestdecomp.sparse_trees import (
    PreconditionError,
    balanced_strong_orientation,
    check_split,
    degree_threshold,
    halving_spanning_tree,
    low_degree_spanning_tree,
    sparse_tree_family,
    split_core_rest,
)

from . import oracles
from .conftest import connected_multigraphs, random_connected_multigraph


def doubled(g: Multigraph) -> Multigraph:
    return Multigraph(g.vertex_count, g.edges + g.edges)


def check_orientation(g, o):
    assert len(o.arcs) == g.edge_count
    for (u, v), (t, h) in zip(g.edges, o.arcs):
        assert {t, h} == {u, v}
    assert o.is_balanced() and o.is_strongly_connected()


def test_orientation_examples():
    c5 = cycle_graph(5)
    o = balanced_strong_orientation(c5)
    check_orientation(c5, o)
    assert o.out_degrees() == [1] * 5 == o.in_degrees()
    k4 = complete_graph(4)
    o = balanced_strong_orientation(k4)
    check_orientation(k4, o)
    assert set(o.out_degrees()) <= {1, 2}
    c3 = doubled(cycle_graph(3))
    o = balanced_strong_orientation(c3)
    assert o.out_degrees() == o.in_degrees()


def test_orientation_requires_two_edge_connectivity():
    with pytest.raises((PreconditionError, ValueError)):
        low_degree_spanning_tree(Multigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]))


@given(connected_multigraphs(max_n=7, max_extra=6))
def test_orientation_against_exhaustive_search(g):
    if g.edge_count > 13:
        return
    exists = oracles.balanced_orientation_exists(g.vertex_count, g.edges)
    # A balanced strong orientation exists exactly for 2-edge-connected graphs.
    assert exists == is_k_edge_connected(g, 2)
    if exists:
        check_orientation(g, balanced_strong_orientation(g))


@given(connected_multigraphs(max_n=12, max_extra=30))
def test_low_degree_tree_bound(g):
    if not is_k_edge_connected(g, 2):
        return
    t = low_degree_spanning_tree(g)
    assert oracles.is_spanning_tree(g.vertex_count, g.edges, t)
    dt = degrees_in(g, t)
    for v in range(g.vertex_count):
        assert 2 * dt[v] <= g.degree(v) + 3


def test_low_degree_tree_examples():
    c5 = cycle_graph(5)
    t = low_degree_spanning_tree(c5)
    assert max(degrees_in(c5, t)) <= 2
    k4 = complete_graph(4)
    assert max(degrees_in(k4, low_degree_spanning_tree(k4))) <= 3
    d = 6
    star = Multigraph(d + 1, [(0, i) for i in range(1, d + 1)] * 2)
    assert degrees_in(star, low_degree_spanning_tree(star))[0] <= d + 1


def test_halving_examples():
    c5 = Multigraph(5, cycle_graph(5).edges + ((0, 2), (1, 3), (2, 4), (3, 0), (4, 1)))
    t = halving_spanning_tree(c5, 1)
    dt = degrees_in(c5, t)
    assert all(dt[v] <= c5.degree(v) / 2 + 1.5 for v in range(5))
    t0 = halving_spanning_tree(cycle_graph(5), 0)
    assert oracles.is_spanning_tree(5, cycle_graph(5).edges, t0)


def test_halving_p2_random():
    rng = random.Random(3)
    for _ in range(8):
        n = rng.randrange(4, 14)
        g = random_connected_multigraph(rng, n, 8 * n)
        if not pack_spanning_trees(g, 4).feasible:
            continue
        t = halving_spanning_tree(g, 2)
        assert oracles.is_spanning_tree(n, g.edges, t)
        dt = degrees_in(g, t)
        assert all(dt[v] <= g.degree(v) / 4 + 3 for v in range(n))


def test_halving_needs_packing():
    with pytest.raises(PreconditionError):
        halving_spanning_tree(cycle_graph(5), 1)


def test_degree_threshold_inequality():
    for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 8)):
        for m in range(4):
            L = degree_threshold(eps, m)
            q = 0
            while 2**q < 1 / eps:
                q += 1
            assert 3 * 2**m * (q + 1) <= eps * L / 2
            assert not 3 * 2**m * (q + 1) <= eps * (L - 1) / 2


def test_sparse_family_examples():
    k = complete_graph(13)
    family = sparse_tree_family(k, 1, 0)
    assert len(family) == 1
    dt = degrees_in(k, family[0])
    assert all(dt[v] <= k.degree(v) for v in range(13))
    with pytest.raises(PreconditionError):
        sparse_tree_family(complete_graph(6), 1, 0)


def test_sparse_family_two_trees():
    g = doubled(complete_graph(25))
    family = sparse_tree_family(g, Fraction(1, 2), 1)
    assert len(family) == 2 and not family[0] & family[1]
    total = [a + b for a, b in zip(degrees_in(g, family[0]), degrees_in(g, family[1]))]
    assert all(total[v] <= g.degree(v) / 2 for v in range(g.vertex_count))


def test_split_examples():
    # K9 is below the strict thresholds, so the invariant-only mode is used.
    k9 = complete_graph(9)
    s = split_core_rest(k9, 1, 2, strict=False)
    assert check_split(StubGraph(k9), s) is None
    sub, _ = spanning_subgraph(k9, s.core)
    assert is_k_edge_connected(sub, 1)
    assert min(s.rest_degrees(StubGraph(k9))) >= 2
    one = StubGraph.of(1, [], [(0, 1), (0, 2)])
    s1 = split_core_rest(one, 1, 5)
    assert s1.core == frozenset() and s1.rest == {0, 1}
    with pytest.raises(PreconditionError):
        split_core_rest(complete_graph(9), 1, 2)


def test_split_strict_with_stubs():
    g = StubGraph(complete_graph(25), tuple((v, 1 + v % 3) for v in range(25)))
    s = split_core_rest(g, 1, 10)
    assert check_split(g, s) is None
    assert set(g.stub_ids()) <= s.rest
