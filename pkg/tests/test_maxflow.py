"""Max-flow / min-cut against exhaustive cut enumeration."""

import itertools
import random

import pytest

from mina.maxflow import CapGraph, max_flow_min_cut


def enumerate_min_cut(g: CapGraph, s: int, t: int) -> float:
    """Minimum over all 2^(n-2) s,t-separating bipartitions."""
    others = [v for v in range(g.n) if v not in (s, t)]
    best = float("inf")
    for r in range(len(others) + 1):
        for side in itertools.combinations(others, r):
            side_s = {s, *side}
            value = sum(c for u, v, c in g.edges if (u in side_s) != (v in side_s))
            best = min(best, value)
    return best


def random_graph(rng: random.Random, n: int) -> CapGraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.5:
                edges.append((u, v, rng.randint(0, 8) / 4.0))
    return CapGraph(n, tuple(edges))


def test_path_graph():
    g = CapGraph(3, ((0, 1, 2.0), (1, 2, 1.0)))
    flow, cut = max_flow_min_cut(g, 0, 2)
    assert flow == pytest.approx(1.0)
    assert cut.crossing_edges == ((1, 2),)
    assert cut.side_s == frozenset({0, 1})


def test_disconnected_sink():
    g = CapGraph(3, ((0, 1, 1.0),))
    flow, cut = max_flow_min_cut(g, 0, 2)
    assert flow == 0.0
    assert cut.value == 0.0
    assert 2 not in cut.side_s


def test_diamond():
    g = CapGraph(4, ((0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)))
    flow, _ = max_flow_min_cut(g, 0, 3)
    assert flow == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(25))
def test_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    g = random_graph(rng, n)
    s, t = rng.sample(range(n), 2)
    flow, cut = max_flow_min_cut(g, s, t)
    best = enumerate_min_cut(g, s, t)
    assert flow == pytest.approx(best, abs=1e-9)
    assert cut.value == pytest.approx(best, abs=1e-9)  # duality
    assert s in cut.side_s and t not in cut.side_s


def test_scaling_invariance():
    rng = random.Random(3)
    g = random_graph(rng, 6)
    scaled = CapGraph(g.n, tuple((u, v, 8.0 * c) for u, v, c in g.edges))
    f1, c1 = max_flow_min_cut(g, 0, 5)
    f2, c2 = max_flow_min_cut(scaled, 0, 5)
    assert f2 == pytest.approx(8.0 * f1, abs=1e-9)
    assert c1.side_s == c2.side_s


def test_deterministic():
    rng = random.Random(9)
    g = random_graph(rng, 7)
    assert max_flow_min_cut(g, 0, 6) == max_flow_min_cut(g, 0, 6)


def test_bad_arguments():
    g = CapGraph(2, ((0, 1, 1.0),))
    with pytest.raises(ValueError):
        max_flow_min_cut(g, 0, 0)
    with pytest.raises(ValueError):
        max_flow_min_cut(g, 0, 5)
    with pytest.raises(ValueError):
        max_flow_min_cut(CapGraph(2, ((0, 1, -1.0),)), 0, 1)
