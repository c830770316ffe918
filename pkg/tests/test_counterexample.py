import itertools

import pytest

from forestdecomp.counterexample import (
    assemble_counterexample,
    binary_tree,
    build_blowup,
    certify_obstruction,
    closed_form_sizes,
    edge_total,
    residue_profile,
    s_distance,
    smallest_growth_depth,
    split_sizes,
)
from forestdecomp.graph import Multigraph, canonical_shape, cycle_graph, is_tree, path_graph

from . import oracles


def test_binary_tree_examples():
    assert canonical_shape(binary_tree(1)) == canonical_shape(path_graph(2))
    t2 = binary_tree(2)
    assert (t2.edge_count, t2.vertex_count) == (6, 7)
    t4 = binary_tree(4)
    assert t4.edge_count == 30 and is_tree(t4)
    for k in range(1, 9):
        t = binary_tree(k)
        assert t.edge_count == edge_total(k) == 2 ** (k + 1) - 2
        assert max(t.degree(v) for v in range(t.vertex_count)) <= 3


def test_split_size_examples():
    assert split_sizes(binary_tree(2)) == {0, 2, 3, 5}
    assert split_sizes(path_graph(2)) == {0, 1}
    assert split_sizes(binary_tree(3)) == {0, 2, 6, 7, 11, 13}


def test_split_sizes_match_brute_force_and_closed_form():
    for k in range(1, 9):
        t = binary_tree(k)
        assert split_sizes(t) == oracles.brute_split_sizes(t.vertex_count, t.edges)
        assert split_sizes(t) == closed_form_sizes(k)
        assert len(split_sizes(t)) <= 2 * k


def test_smallest_growth_depth():
    assert smallest_growth_depth(2) == 7
    assert (2 * 7) ** 2 == 196 < edge_total(7) == 254
    assert not (2 * 6) ** 2 < edge_total(6)


def test_residue_profile_examples():
    p = residue_profile(3, 1)
    assert p.t_set == (0, 2, 6, 7, 11, 13)
    assert p.missing == 1 and p.status == "ok"
    p = residue_profile(7, 2)
    assert p.missing == 9 and 9 not in p.attainable
    assert len(p.attainable) <= (2 * 7) ** 2
    assert residue_profile(1, 1).status == "none"


def test_attainable_matches_enumeration():
    for k in range(1, 6):
        for f3 in (1, 2, 3):
            p = residue_profile(k, f3)
            brute = {sum(c) % p.n_k for c in itertools.product(p.t_set, repeat=f3)}
            assert p.attainable == brute
            assert len(p.attainable) <= min(p.n_k, (2 * k) ** f3)


def test_build_blowup_examples():
    b = build_blowup(2, 2, 3, 1)
    g, s = b
    assert len(s) == 2 and s_distance(g, s) >= 6
    assert g.edge_count % 6 == 1
    assert b.meta["residue"] == 1
    with pytest.raises(ValueError):
        build_blowup(2, 2, 1, 1)
    with pytest.raises(ValueError):
        build_blowup(2, 5, 2, 61)


def test_assemble_counterexample_divisibility():
    g1, s1 = build_blowup(2, 2, 3, 1)
    g2, s2 = build_blowup(2, 2, 3, (6 - 2 - 1) % 6)
    cx = assemble_counterexample(g1, s1, g2, s2, 2, 2)
    assert cx.graph.edge_count % 6 == 0
    assert len(cx.matching) == 2
    with pytest.raises(ValueError):
        assemble_counterexample(g1, list(s1)[:1], g2, s2, 2, 2)
    with pytest.raises(ValueError):
        assemble_counterexample(g1, s1, g1, s1, 2, 2)


def test_toy_obstruction_confirmed_by_search():
    # T_2 has 6 edges and split sizes {0, 2, 3, 5}: residue 1 is missing for f3 = 1
    profile = residue_profile(2, 1)
    g1 = cycle_graph(7)
    g2 = cycle_graph(4)
    cx = assemble_counterexample(g1, [0], g2, [0], 1, 2)
    report = certify_obstruction(profile, cx, search_budget=200_000)
    assert report.issued and report.search == "infeasible"


def test_certificate_refused_on_short_distance():
    profile = residue_profile(2, 2)
    g1 = Multigraph(8, tuple((i, i + 1) for i in range(7)))  # 7 edges, residue 1
    g2 = Multigraph(4, ((0, 1), (1, 2), (2, 3)))  # 3 edges, 7 + 3 + 2 = 12
    cx = assemble_counterexample(g1, [0, 2], g2, [0, 3], 2, 2)
    report = certify_obstruction(profile, cx)
    assert not report.issued
    assert not report.premises["S1 pairwise distance >= 2k+2"]


def test_certificate_on_depth_seven_instance():
    profile = residue_profile(7, 2)
    n_k = profile.n_k
    g1, s1 = build_blowup(2, 7, 24, profile.missing)
    g2, s2 = build_blowup(2, 7, 24, (n_k - 2 - profile.missing) % n_k)
    cx = assemble_counterexample(g1, s1, g2, s2, 2, 7)
    report = certify_obstruction(profile, cx)
    assert report.issued and all(report.premises.values())
