import pytest

from forestdecomp.connectivity import edge_connectivity
from forestdecomp.generators import GeneratorError, chain_host, clustered, gen_host, random_min_degree
from forestdecomp.peeling import peel


def test_random_min_degree():
    g, meta = gen_host("random-min-degree", 1, n=30, delta=8)
    assert meta["min_degree"] >= 8
    assert min(g.degree(v) for v in range(30)) >= 8
    assert g.is_simple()


def test_random_min_degree_modulus():
    for seed in range(5):
        g = random_min_degree(20, 5, seed, p=0.2, modulus=7)
        assert g.edge_count % 7 == 0


def test_seed_determines_output():
    assert random_min_degree(25, 6, 3) == random_min_degree(25, 6, 3)
    assert clustered([10, 8], 4)[0] == clustered([10, 8], 4)[0]
    assert clustered([10, 8], 4)[0] != clustered([10, 8], 5)[0]


def test_clustered_peels_into_parts():
    g, clusters = gen_host("clustered", 2, sizes=[12, 12, 12], p=0.9, bridges=1)
    assert len(clusters["clusters"]) == 3
    seq = peel(g, 3)
    assert len(seq) >= 3


def test_clustered_part_moduli():
    for seed in range(10):
        g, clusters = clustered([36, 22], seed, p=0.85, bridges=2, modulus=3, part_moduli=[None, 15])
        assert g.edge_count % 3 == 0
        small = set(clusters[1])
        touching = sum(1 for u, v in g.edges if u in small or v in small)
        assert touching % 15 == 0


def test_chain_host_is_connected():
    g, clusters = chain_host(4, 6, 0)
    assert len(clusters) == 4 and edge_connectivity(g) >= 1


def test_blowup_kind():
    g, meta = gen_host("blowup", 0, f3=2, k=2, t=3, residue=1)
    assert meta["edges"] % 6 == 1 and len(meta["S"]) == 2


def test_generator_errors():
    with pytest.raises(GeneratorError):
        random_min_degree(5, 5, 0)
    with pytest.raises(GeneratorError):
        gen_host("nope", 0)
    with pytest.raises(GeneratorError):
        clustered([1, 4], 0)
