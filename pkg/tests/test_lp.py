"""Simplex solver tests against a basic-feasible-solution enumeration oracle."""

import itertools
import random

import numpy as np
import pytest

from mina import lp as lp_mod
from mina.lp import LinearProgram, LpError, add_constraint_and_resolve, dump, solve


def enumerate_optimum(lp: LinearProgram, tol: float = 1e-9):
    """Minimum objective over all vertices of the feasible polytope.

    Vertices are intersections of num_vars tight hyperplanes chosen among
    constraint boundaries and bound facets; only practical for tiny LPs.
    Returns None when no feasible vertex exists.
    """
    n = lp.num_vars
    planes = []
    for row, sense, rhs in lp.constraints:
        a = np.zeros(n)
        for j, c in row.items():
            a[j] = c
        planes.append((a, float(rhs)))
    for j, (lo, hi) in enumerate(lp.bounds):
        e = np.zeros(n)
        e[j] = 1.0
        planes.append((e, lo))
        if hi != lo:
            planes.append((e, hi))

    c = np.zeros(n)
    for j, v in lp.objective.items():
        c[j] = v

    def feasible(x) -> bool:
        for j, (lo, hi) in enumerate(lp.bounds):
            if x[j] < lo - tol or x[j] > hi + tol:
                return False
        for row, sense, rhs in lp.constraints:
            lhs = sum(coef * x[j] for j, coef in row.items())
            if sense == "<=" and lhs > rhs + tol:
                return False
            if sense == ">=" and lhs < rhs - tol:
                return False
            if sense == "==" and abs(lhs - rhs) > tol:
                return False
        return True

    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[i][0] for i in combo])
        b = np.array([planes[i][1] for i in combo])
        if abs(np.linalg.det(A)) < 1e-10:
            continue
        x = np.linalg.solve(A, b)
        if feasible(x):
            value = float(c @ x)
            if best is None or value < best:
                best = value
    return best


def random_lp(seed: int) -> LinearProgram:
    """A random LP that is feasible by construction (anchored at x0)."""
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    bounds = []
    for _ in range(n):
        lo = rng.uniform(-3, 0)
        bounds.append((lo, lo + rng.uniform(0.5, 4)))
    x0 = [rng.uniform(lo, hi) for lo, hi in bounds]
    lp = LinearProgram(num_vars=n, bounds=bounds)
    for _ in range(rng.randint(2, 5)):
        row = {
            j: rng.uniform(-2, 2)
            for j in rng.sample(range(n), rng.randint(1, n))
        }
        anchor = sum(c * x0[j] for j, c in row.items())
        sense = rng.choice(["<=", ">=", "=="])
        if sense == "<=":
            rhs = anchor + rng.uniform(0, 2)
        elif sense == ">=":
            rhs = anchor - rng.uniform(0, 2)
        else:
            rhs = anchor
        lp.add_constraint(row, sense, rhs)
    lp.objective = {j: rng.uniform(-2, 2) for j in range(n)}
    return lp


def test_bounds_only():
    lp = LinearProgram(num_vars=2, bounds=[(0, 4), (-1, 1)], objective={0: 1.0, 1: -1.0})
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.values == pytest.approx([0.0, 1.0])
    assert sol.objective_value == pytest.approx(-1.0)


def test_simple_constraint():
    lp = LinearProgram(num_vars=1, bounds=[(0, 10)], objective={0: 1.0})
    lp.add_constraint({0: 1.0}, ">=", 3.0)
    sol = solve(lp)
    assert sol.objective_value == pytest.approx(3.0)


def test_infeasible():
    lp = LinearProgram(num_vars=1, bounds=[(0, 1)], objective={0: 1.0})
    lp.add_constraint({0: 1.0}, ">=", 2.0)
    assert solve(lp).status == "infeasible"


def test_equality_constraint():
    lp = LinearProgram(num_vars=2, bounds=[(0, 5), (0, 5)], objective={0: 1.0, 1: 2.0})
    lp.add_constraint({0: 1.0, 1: 1.0}, "==", 3.0)
    sol = solve(lp)
    assert sol.objective_value == pytest.approx(3.0)
    assert sol.values == pytest.approx([3.0, 0.0])


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        LinearProgram(num_vars=1, bounds=[(0, float("inf"))])
    lp = LinearProgram(num_vars=1, bounds=[(0, 1)])
    with pytest.raises(ValueError):
        lp.add_constraint({0: 1.0}, "<", 1.0)
    with pytest.raises(ValueError):
        lp.add_constraint({0: float("nan")}, "<=", 1.0)


@pytest.mark.parametrize("seed", range(20))
def test_matches_enumeration(seed):
    lp = random_lp(seed)
    sol = solve(lp)
    best = enumerate_optimum(lp)
    assert sol.status == "optimal"
    assert best is not None
    assert sol.objective_value == pytest.approx(best, abs=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_weak_duality_against_enumerated_vertices(seed):
    # the reported optimum is a lower bound on every feasible point's value
    lp = random_lp(seed + 100)
    sol = solve(lp)
    best = enumerate_optimum(lp)
    assert sol.objective_value <= best + 1e-6


def test_deterministic():
    lp = random_lp(42)
    a = solve(lp)
    b = solve(random_lp(42))
    assert a.values == b.values and a.objective_value == b.objective_value


def test_add_constraint_and_resolve_matches_fresh_solve():
    lp = random_lp(7)
    sol = solve(lp)
    row = {0: 1.0}
    rhs = sol.values[0] + 0.1  # cuts off nothing drastic but changes the LP
    sol2 = add_constraint_and_resolve(lp, sol, row, ">=", rhs)
    fresh = solve(lp)
    assert sol2.status == fresh.status
    if sol2.status == "optimal":
        assert sol2.objective_value == pytest.approx(fresh.objective_value, abs=1e-9)


def test_optimal_solutions_satisfy_constraints():
    for seed in range(5):
        lp = random_lp(seed + 50)
        sol = solve(lp)  # solve() raises LpError if its own check fails
        assert sol.status == "optimal"
        for j, (lo, hi) in enumerate(lp.bounds):
            assert lo - 1e-6 <= sol.values[j] <= hi + 1e-6


def test_dump_mentions_every_constraint():
    lp = random_lp(1)
    text = dump(lp)
    assert text.count("\n") == 1 + len(lp.constraints) + lp.num_vars
