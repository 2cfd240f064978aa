"""Coverage problem: LP relaxation and both rounding schemes.

The LP minimizes the max vertex cost M subject to per-edge coverage
written through auxiliary variables z (one per edge and common interface)
with z bounded by the endpoint activations.  Cheap vertices have their
activation variables substituted by 1; expensive vertices optionally carry
the cost-floor constraint used by the randomized analysis.

Roundings:
* deterministic threshold at 1/k (k = number of distinct interfaces);
* randomized thresholds, one per interface type, scaled by 2 ln m.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import exact, lp as lp_mod, preprocess, verify
from .instance import Assignment, Instance
from .lp import LinearProgram, LpSolution
from .preprocess import ScaledInstance
from .seeding import mix64

X_CLAMP = 1e-12  # LP values below this count as exactly zero
EPS_THRESHOLD = 1e-7  # slack absorbing solver tolerance in 1/k comparisons


@dataclass(frozen=True)
class CoverageFractional:
    """Fractional LP optimum: x per (interface, vertex), z per (interface,
    edge), and the objective value M.  Cheap vertices appear with x = 1."""

    x: dict[tuple[int, int], float]
    z: dict[tuple[int, int, int], float]
    M: float


class CoverageLpInfeasible(RuntimeError):
    pass


def build_coverage_lp(
    s: ScaledInstance, include_cost_floor: bool = True
) -> tuple[LinearProgram, dict]:
    """Build the coverage LP over a scaled (or identity) instance view.

    Returns (lp, varmap) where varmap holds indices for "M", ("x", i, v)
    for expensive vertices, and ("z", i, u, v) per edge/common interface.
    """
    return build_base_lp(s, include_cost_floor, with_y=False)


def build_base_lp(
    s: ScaledInstance, include_cost_floor: bool, with_y: bool
) -> tuple[LinearProgram, dict]:
    """Shared LP skeleton for the coverage and connectivity relaxations.

    With ``with_y`` each edge additionally gets a y variable in [0, 1] and
    its coverage row becomes "sum z >= y" instead of "sum z >= 1"; cut
    constraints over the y variables are the caller's business.
    """
    inst = s.base
    varmap: dict = {}
    bounds: list[tuple[float, float]] = []

    vertex_totals = [
        float(sum((s.scaled_cost[(i, v)] for i in s.kept_of[v]), Fraction(0)))
        for v in range(inst.n)
    ]
    m_upper = max(vertex_totals, default=0.0)
    varmap["M"] = 0
    bounds.append((0.0, m_upper))

    for v in range(inst.n):
        if s.is_cheap(v):
            continue
        for i in sorted(s.kept_of[v]):
            varmap[("x", i, v)] = len(bounds)
            bounds.append((0.0, 1.0))
    for u, v in inst.edges:
        common = s.common_kept(u, v)
        if not common:
            raise CoverageLpInfeasible(f"edge ({u},{v}) has no kept common interface")
        for i in sorted(common):
            varmap[("z", i, u, v)] = len(bounds)
            bounds.append((0.0, 1.0))
    if with_y:
        for u, v in inst.edges:
            varmap[("y", u, v)] = len(bounds)
            bounds.append((0.0, 1.0))

    prog = LinearProgram(num_vars=len(bounds), bounds=bounds, objective={0: 1.0})

    for v in range(inst.n):
        if s.is_cheap(v):
            # activation is fixed; only the budget constraint M >= total remains
            prog.add_constraint({0: 1.0}, ">=", vertex_totals[v])
            continue
        row = {varmap[("x", i, v)]: float(s.scaled_cost[(i, v)]) for i in s.kept_of[v]}
        row[0] = -1.0
        prog.add_constraint(row, "<=", 0.0)
        if include_cost_floor:
            floor_row = {
                varmap[("x", i, v)]: float(s.scaled_cost[(i, v)]) for i in s.kept_of[v]
            }
            prog.add_constraint(floor_row, ">=", 1.0)

    for u, v in inst.edges:
        common = sorted(s.common_kept(u, v))
        cover_row = {varmap[("z", i, u, v)]: 1.0 for i in common}
        if with_y:
            cover_row[varmap[("y", u, v)]] = -1.0
            prog.add_constraint(cover_row, ">=", 0.0)
        else:
            prog.add_constraint(cover_row, ">=", 1.0)
        for i in common:
            zj = varmap[("z", i, u, v)]
            for endpoint in (u, v):
                if s.is_cheap(endpoint):
                    continue  # z <= 1 already enforced by its bound
                prog.add_constraint({zj: 1.0, varmap[("x", i, endpoint)]: -1.0}, "<=", 0.0)

    return prog, varmap


def fractional_from_solution(
    s: ScaledInstance, sol: LpSolution, varmap: dict
) -> CoverageFractional:
    x: dict[tuple[int, int], float] = {}
    z: dict[tuple[int, int, int], float] = {}
    for v in range(s.base.n):
        for i in s.kept_of[v]:
            x[(i, v)] = 1.0 if s.is_cheap(v) else sol.values[varmap[("x", i, v)]]
    for key, idx in varmap.items():
        if isinstance(key, tuple) and key[0] == "z":
            z[(key[1], key[2], key[3])] = sol.values[idx]
    return CoverageFractional(x=x, z=z, M=sol.objective_value)


def solve_coverage_lp(
    s: ScaledInstance, include_cost_floor: bool = True
) -> CoverageFractional:
    prog, varmap = build_coverage_lp(s, include_cost_floor)
    sol = lp_mod.solve(prog)
    if sol.status != "optimal":
        raise CoverageLpInfeasible(f"coverage LP is {sol.status}")
    return fractional_from_solution(s, sol, varmap)


# ---------------------------------------------------------------------------
# Roundings
# ---------------------------------------------------------------------------

def round_k_threshold(
    s: ScaledInstance, frac: CoverageFractional, k: int | None = None
) -> Assignment:
    """Activate every interface whose LP value reaches 1/k.

    Always produces a covering assignment: by averaging, some common
    interface of each edge has min(x_u, x_v) >= 1/k.
    """
    if k is None:
        k = s.base.k
    threshold = 1.0 / k - EPS_THRESHOLD
    active = []
    for v in range(s.base.n):
        if s.is_cheap(v):
            active.append(frozenset(s.kept_of[v]))
        else:
            active.append(
                frozenset(i for i in s.kept_of[v] if frac.x[(i, v)] >= threshold)
            )
    return Assignment(tuple(active))


def round_randomized_coverage(
    s: ScaledInstance,
    frac: CoverageFractional,
    seed: int,
    scale: float | None = None,
) -> Assignment:
    """One randomized-threshold rounding trial; feasibility not guaranteed.

    Each interface type draws one threshold t_i in (0, 1]; an expensive
    vertex activates i iff scale * x_{i,v} >= t_i (scale defaults to
    2 ln m).  Cheap vertices activate everything they kept.
    """
    inst = s.base
    if scale is None:
        if inst.m < 2:
            raise ValueError("randomized rounding needs m >= 2 (2 ln m >= 1)")
        scale = 2.0 * math.log(inst.m)
    rng = random.Random(seed)
    all_ifaces = sorted({i for kept in s.kept_of for i in kept})
    thresholds = {i: 1.0 - rng.random() for i in all_ifaces}

    active = []
    for v in range(inst.n):
        if s.is_cheap(v):
            active.append(frozenset(s.kept_of[v]))
            continue
        chosen = set()
        for i in s.kept_of[v]:
            xv = frac.x[(i, v)]
            if xv < X_CLAMP:
                continue
            if scale * xv >= thresholds[i]:
                chosen.add(i)
        active.append(frozenset(chosen))
    return Assignment(tuple(active))


# ---------------------------------------------------------------------------
# Full pipeline
# ---------------------------------------------------------------------------

COVERAGE_ALGOS = ("k-threshold", "randomized", "exact")


def raw_lp_bound(inst: Instance) -> float:
    """Optimum of the plain relaxation (no preprocessing, no cost floor).

    A true lower bound on the exact coverage OPT in original cost units.
    """
    frac = solve_coverage_lp(preprocess.identity_scaled(inst), include_cost_floor=False)
    return frac.M


def _solve_single_edge(inst: Instance) -> Assignment:
    """m = 1 degenerate case: cheapest common interface on the unique edge."""
    (u, v) = inst.edges[0]
    best = min(
        inst.common_interfaces(u, v),
        key=lambda i: (max(inst.cost[(i, u)], inst.cost[(i, v)]), i),
    )
    active = [frozenset() for _ in range(inst.n)]
    active[u] = frozenset({best})
    active[v] = frozenset({best})
    return Assignment(tuple(active))


def solve_coverage(
    inst: Instance,
    algo: str = "randomized",
    seed: int = 0,
    restarts_floor: int = 3,
    exact_budget: int = 24,
) -> tuple[Assignment | None, dict]:
    """Run the full coverage pipeline and return (assignment, report)."""
    if algo not in COVERAGE_ALGOS:
        raise ValueError(f"unknown coverage algo {algo!r}")
    report: dict = {"problem": "coverage", "algo": algo, "seed": seed, "b": None, "trials": 1}

    if algo == "exact":
        cost, a = exact.exact_coverage(inst, budget=exact_budget)
        report.update(lp_bound=None, max_cost=str(cost), max_cost_float=float(cost), feasible=True)
        return a, report

    report["lp_bound"] = raw_lp_bound(inst)

    if algo == "k-threshold":
        # the deterministic rounding needs no preprocessing; the raw LP
        # (without the cost floor) matches the k-approximation analysis
        s = preprocess.identity_scaled(inst)
        frac = solve_coverage_lp(s, include_cost_floor=False)
        a = round_k_threshold(s, frac)
        ok, uncovered = verify.is_covering(inst, a)
        assert ok, f"k-threshold rounding left edges uncovered: {uncovered}"
        cost, _ = verify.max_cost(inst, a)
        report.update(max_cost=str(cost), max_cost_float=float(cost), feasible=True)
        return a, report

    # randomized
    if inst.m < 2:
        a = _solve_single_edge(inst)
        cost, _ = verify.max_cost(inst, a)
        report.update(max_cost=str(cost), max_cost_float=float(cost), feasible=True)
        return a, report

    frac_cache: dict[int, CoverageFractional | None] = {}

    def procedure(s: ScaledInstance, run_seed: int) -> tuple[Assignment, bool]:
        assert s.b is not None
        if s.b not in frac_cache:
            try:
                frac_cache[s.b] = solve_coverage_lp(s, include_cost_floor=True)
            except CoverageLpInfeasible:
                frac_cache[s.b] = None
        frac = frac_cache[s.b]
        if frac is None:
            return Assignment(tuple(frozenset() for _ in range(inst.n))), False
        a = round_randomized_coverage(s, frac, run_seed)
        return a, verify.is_covering(inst, a)[0]

    best, info = preprocess.run_with_restarts(inst, procedure, seed, restarts_floor)
    report["trials"] = info["trials"]
    report["b"] = info["best_b"]
    if best is None:
        report.update(max_cost=None, max_cost_float=None, feasible=False)
        return None, report
    cost = info["best_cost"]
    report.update(max_cost=str(cost), max_cost_float=float(cost), feasible=True)
    return best, report
