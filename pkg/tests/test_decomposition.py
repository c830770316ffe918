import json

from hypothesis import given
from hypothesis import strategies as st

from forestdecomp.chains import chain
from forestdecomp.decomposition import (
    Decomposition,
    Embedding,
    Twig,
    decomposition_from_json,
    decomposition_to_json,
    regroup,
    twig_of,
    verify,
)
from forestdecomp.graph import Multigraph, StubGraph, canonical_shape, complete_graph, disjoint_union, path_graph, star_graph

from .conftest import random_trees

P3 = canonical_shape(path_graph(3))
CLAW = canonical_shape(star_graph(3))

# K4 edges: 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3)
K4 = StubGraph(complete_graph(4))


def test_verify_empty_host():
    assert verify(Decomposition(StubGraph.of(3), ())).ok


def test_verify_k4_paths():
    # 1-0-2-3 and 2-1-3-0 (as edge sets)
    d = Decomposition(K4, (Embedding(P3, frozenset({0, 1, 5})), Embedding(P3, frozenset({3, 4, 2}))))
    assert verify(d).ok


def test_verify_reports_non_isomorphic_part():
    d = Decomposition(K4, (Embedding(CLAW, frozenset({0, 1, 2})), Embedding(CLAW, frozenset({3, 4, 5}))))
    v = verify(d)
    assert not v.ok and v.part == 1 and "part 1 not isomorphic" in v.message


def test_verify_overlap_and_gaps():
    d = Decomposition(K4, (Embedding(P3, frozenset({0, 1, 5})), Embedding(P3, frozenset({0, 4, 2}))))
    assert "used by parts 0 and 1" in verify(d).message
    d = Decomposition(K4, (Embedding(P3, frozenset({0, 1, 5})),))
    assert "not covered" in verify(d).message
    d = Decomposition(K4, (Embedding(P3, frozenset({0, 1, 9})),))
    assert "not an edge" in verify(d).message


def test_verify_stub_rules():
    g = StubGraph.of(2, [(0, 1)], [(1, 1), (1, 1)])
    p2 = canonical_shape(path_graph(2))
    edge = Twig.single_edge()
    same_index = Decomposition(g, (Embedding(canonical_shape(path_graph(3)), frozenset({0}), frozenset({1, 2}), {1: edge, 2: edge}),))
    assert "same index" in verify(same_index).message
    missing = Decomposition(g, (Embedding(p2, frozenset({0}), frozenset({1})), Embedding(canonical_shape(path_graph(1)), frozenset(), frozenset({2}), {2: edge})))
    assert "twig" in verify(missing).message
    ok = Decomposition(g, (Embedding(p2, frozenset({0}), frozenset({1}), {1: edge}), Embedding(p2, frozenset(), frozenset({2}), {2: twig_of(path_graph(2), 0)})))
    assert verify(ok).ok
    bad_root = Decomposition(g, (Embedding(p2, frozenset({0}), frozenset({1}), {1: edge}), Embedding(p2, frozenset(), frozenset({2}), {2: Twig(path_graph(2), 1)})))
    assert "root is not a leaf" in verify(bad_root).message


def test_verify_never_throws_on_garbage():
    d = Decomposition(K4, (Embedding(P3, frozenset({"x", 1, 2})),))
    assert not verify(d).ok


def test_twig_of_moves_root_to_zero():
    t = twig_of(path_graph(3), 3)
    assert t.root == 0 and t.problem() is None
    assert canonical_shape(t.tree) == canonical_shape(path_graph(3))


def test_json_round_trip():
    g = StubGraph.of(3, [(0, 1), (1, 2)], [(2, 1)])
    p3 = canonical_shape(path_graph(3))
    d = Decomposition(g, (Embedding(p3, frozenset({0, 1}), frozenset({2}), {2: Twig.single_edge()}),))
    assert verify(d).ok
    obj = json.loads(json.dumps(decomposition_to_json(d)))
    back = decomposition_from_json(g, obj)
    assert verify(back).ok and back.parts[0].elements == d.parts[0].elements


@given(st.lists(random_trees(max_n=6), min_size=1, max_size=4), st.integers(1, 4))
def test_regroup_transitivity(trees, copies):
    """Pieces -> chains -> one host: both levels verify and compose."""
    ct = chain(trees)
    host = disjoint_union([ct.tree] * copies)
    m = ct.edge_count
    shapes = [canonical_shape(t) for t in trees]
    fine = []
    groups = []
    for c in range(copies):
        grp = []
        for shape, part in zip(shapes, ct.parts):
            grp.append(len(fine))
            fine.append(Embedding(shape, frozenset(e + c * m for e in part)))
        groups.append(grp)
    d = Decomposition(StubGraph(host), tuple(fine))
    assert verify(d).ok
    coarse = regroup(d, groups, canonical_shape(ct.tree))
    assert verify(coarse).ok and len(coarse.parts) == copies


def test_counts():
    d = Decomposition(K4, (Embedding(P3, frozenset({0, 1, 5})), Embedding(P3, frozenset({3, 4, 2}))))
    assert d.counts() == {P3: 2} and d.count(CLAW) == 0
