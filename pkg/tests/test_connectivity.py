"""Connectivity LP with lazy cuts, H sampling, and iterative rounding."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from mina import connectivity, exact, verify
from mina.connectivity import (
    ConnectivityFractional,
    iterative_rounding,
    rounds_budget,
    sample_h,
    separation_oracle,
    solve_connectivity,
    solve_connectivity_lp,
)
from mina.coverage import build_base_lp
from mina import lp as lp_mod
from mina.instance import generate_random
from mina.preprocess import identity_scaled
from mina.seeding import mix64

import helpers


def all_separating_cuts(n, edges, groups):
    """Every bipartition (as the side containing vertex 0) splitting a group."""
    cuts = []
    for bits in range(1 << (n - 1)):
        side = {0} | {v for v in range(1, n) if bits >> (v - 1) & 1}
        if not any(
            any(v in side for v in g) and any(v not in side for v in g)
            for g in groups
            if len(g) >= 2
        ):
            continue
        crossing = [e for e in edges if (e[0] in side) != (e[1] in side)]
        cuts.append((side, crossing))
    return cuts


def min_separating_value(n, edges, y, groups):
    return min(
        (sum(y[e] for e in crossing) for _, crossing in all_separating_cuts(n, edges, groups)),
        default=float("inf"),
    )


@pytest.mark.parametrize("seed", range(10))
def test_separation_oracle_matches_enumeration(seed):
    inst = generate_random(6, 3, 0.5, (0, 1), num_groups=2, group_size=2, seed=seed)
    rng = random.Random(seed)
    y = {e: rng.random() for e in inst.edges}
    cut, calls = separation_oracle(inst.n, inst.edges, y, inst.groups)
    best = min_separating_value(inst.n, inst.edges, y, inst.groups)
    if cut is None:
        assert best >= 1.0 - connectivity.EPS_SEP - 1e-9
    else:
        assert cut.value == pytest.approx(best, abs=1e-9)
        assert cut.value < 1.0 - connectivity.EPS_SEP
    assert calls >= 1


@pytest.mark.parametrize("seed", range(5))
def test_cutting_planes_match_fully_enumerated_lp(seed):
    inst = generate_random(6, 3, 0.5, (0, 1), num_groups=1, group_size=3, seed=seed)
    s = identity_scaled(inst)
    frac, info = solve_connectivity_lp(s, include_cost_floor=False)

    prog, varmap = build_base_lp(s, include_cost_floor=False, with_y=True)
    for _, crossing in all_separating_cuts(inst.n, inst.edges, inst.groups):
        prog.add_constraint({varmap[("y", e[0], e[1])]: 1.0 for e in crossing}, ">=", 1.0)
    full = lp_mod.solve(prog)
    assert full.status == "optimal"
    assert frac.M == pytest.approx(full.objective_value, abs=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_no_violated_cut_at_termination(seed):
    inst = generate_random(7, 3, 0.4, (0, 1), num_groups=2, group_size=2, seed=seed)
    frac, _ = solve_connectivity_lp(identity_scaled(inst), include_cost_floor=False)
    best = min_separating_value(inst.n, inst.edges, frac.y, inst.groups)
    assert best >= 1.0 - connectivity.EPS_SEP - 1e-9


def test_lp_bound_below_exact_opt():
    for seed in range(4):
        inst = generate_random(6, 3, 0.5, (0, 2), num_groups=1, group_size=3, seed=seed)
        opt, _ = exact.exact_connectivity(inst)
        assert connectivity.raw_lp_bound(inst) <= float(opt) + 1e-6


def test_rounds_budget():
    assert rounds_budget(2) == 3
    assert rounds_budget(25) == 11


def _frac_with_y(edges, y_values, x=None):
    return ConnectivityFractional(x=x or {}, z={}, y=dict(zip(edges, y_values)), M=0.0)


def test_sample_h_deterministic_and_respects_extremes():
    edges = tuple((0, v) for v in range(1, 26))
    frac = _frac_with_y(edges, [0.0] * 5 + [1.0] * 5 + [0.04] * 15)
    h1 = sample_h(frac, edges, m=25, seed=3)
    h2 = sample_h(frac, edges, m=25, seed=3)
    assert h1 == h2
    assert not h1 & set(edges[:5])  # y = 0 edges never sampled
    assert set(edges[5:10]) <= h1  # 4 ln 25 * 1 > 1 edges always sampled


def test_sample_h_marginals_and_pairwise_independence():
    m = 25
    edges = tuple((0, v) for v in range(1, m + 1))
    y = [0.02, 0.05, 0.07] + [0.01] * (m - 3)
    frac = _frac_with_y(edges, y)
    trials = 3000
    counts = [0] * m
    joint = 0  # edges 0 and 1 sampled together
    for t in range(trials):
        h = sample_h(frac, edges, m, seed=mix64(17, t))
        for idx, e in enumerate(edges):
            if e in h:
                counts[idx] += 1
        if edges[0] in h and edges[1] in h:
            joint += 1
    scale = 4.0 * math.log(m)
    for idx in range(3):
        p = min(1.0, scale * y[idx])
        sigma = math.sqrt(trials * p * (1 - p))
        assert abs(counts[idx] - trials * p) <= 3 * sigma + 1
    p01 = min(1.0, scale * y[0]) * min(1.0, scale * y[1])
    sigma = math.sqrt(trials * p01 * (1 - p01))
    assert abs(joint - trials * p01) <= 3 * sigma + 1


def test_iterative_rounding_monotone_in_rounds():
    inst = generate_random(8, 3, 0.5, (0, 1), num_groups=1, group_size=3, seed=2)
    s = identity_scaled(inst)
    frac, _ = solve_connectivity_lp(s, include_cost_floor=False)
    h = sample_h(frac, inst.edges, inst.m, seed=5)
    a2, _ = iterative_rounding(s, frac, h, seed=9, rounds=2, early_exit=False)
    a5, _ = iterative_rounding(s, frac, h, seed=9, rounds=5, early_exit=False)
    for v in range(inst.n):
        assert a2.active_of[v] <= a5.active_of[v]


def test_cheap_upfront_policies():
    inst = helpers.path3()
    guesses = [s for s in connectivity.preprocess.enumerate_guesses(inst)]
    s = guesses[0]  # b = 1 view: vertex a is cheap
    assert s.is_cheap(0)
    incident = connectivity._cheap_upfront(s, h=frozenset(), policy="incident")
    everything = connectivity._cheap_upfront(s, h=frozenset(), policy="all")
    assert incident[0] == frozenset(s.kept_of[0])  # a is a terminal
    assert everything[0] == frozenset(s.kept_of[0])
    with pytest.raises(ValueError):
        connectivity._cheap_upfront(s, frozenset(), policy="bogus")


def test_path_pipeline_matches_exact():
    inst = helpers.path3()
    a, report = solve_connectivity(inst, seed=3)
    opt, _ = exact.exact_connectivity(inst)
    assert report["feasible"]
    assert verify.is_connecting(inst, a)[0]
    assert Fraction(report["max_cost"]) == opt == 2


def test_singleton_groups_cost_zero():
    inst = helpers.build_instance(
        {"a": {1}, "b": {1}, "c": {1}},
        [("a", "b"), ("b", "c")],
        groups=[{"a"}, {"c"}],
    )
    a, report = solve_connectivity(inst, seed=0)
    assert a.is_empty()
    assert report["max_cost"] == "0" and report["feasible"]


def test_demo_topology_pipeline():
    inst = helpers.demo_connect()
    a, report = solve_connectivity(inst, seed=21)
    assert report["feasible"]
    assert verify.is_connecting(inst, a)[0]
    opt, _ = exact.exact_connectivity(inst)
    got = Fraction(report["max_cost"])
    assert opt <= got
    bound = 24.0 * math.log(inst.m) ** 2 / (1.0 - 1.0 / math.e)
    assert float(got) <= bound * float(opt) + 2.0


def test_solve_connectivity_deterministic():
    inst = generate_random(8, 3, 0.4, (0, 1), num_groups=2, group_size=2, seed=13)
    r1 = solve_connectivity(inst, seed=99)
    r2 = solve_connectivity(inst, seed=99)
    assert r1 == r2


def test_requires_groups():
    with pytest.raises(ValueError):
        solve_connectivity(helpers.triangle(), seed=0)
