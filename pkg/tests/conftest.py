import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from forestdecomp.graph import Multigraph

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def random_connected_multigraph(rng: random.Random, n: int, extra: int, loops: bool = False) -> Multigraph:
    """Random spanning tree plus ``extra`` random edges (parallel edges allowed)."""
    edges = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        edges.append((order[i], order[rng.randrange(i)]))
    for _ in range(extra):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v and not loops:
            continue
        edges.append((u, v))
    return Multigraph(n, tuple(edges))


@st.composite
def connected_multigraphs(draw, max_n=9, max_extra=12, min_n=2):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.integers(0, max_extra))
    return random_connected_multigraph(random.Random(seed), n, extra)


@st.composite
def random_trees(draw, max_n=12, min_n=2):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return Multigraph(n, tuple((p, i) for i, p in enumerate(parents, 1)))


@st.composite
def random_forests(draw, max_components=3, max_size=5):
    comps = draw(st.integers(1, max_components))
    edges = []
    offset = 0
    for _ in range(comps):
        n = draw(st.integers(2, max_size + 1))
        parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
        edges.extend((offset + p, offset + i) for i, p in enumerate(parents, 1))
        offset += n
    return Multigraph(offset, tuple(edges))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    from .acceptance_log import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
