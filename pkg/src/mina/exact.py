"""Brute-force exact solvers for small instances.

Two modes per problem:

* ``plain`` enumerates every activation bitmask (slot = (vertex,
  interface) in vertex-major order) and is the oracle of record; it is
  trivially auditable but exponential in the total number of slots.
* ``auto`` searches the candidate max-cost budgets (all per-vertex subset
  sums) for the smallest feasible one, then extracts the lexicographically
  smallest feasible bitmask at that budget.  It returns exactly the same
  (cost, assignment) as plain enumeration, just faster.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import verify
from .instance import Assignment, Instance


class BudgetExceeded(RuntimeError):
    """Instance too large for the enumeration budget."""


def _slots(inst: Instance) -> list[list[int]]:
    """Per-vertex sorted interface lists; slot order is vertex-major."""
    return [sorted(inst.interfaces_of[v]) for v in range(inst.n)]


def _check_budget(inst: Instance, budget: int) -> list[list[int]]:
    per_vertex = _slots(inst)
    total = sum(len(s) for s in per_vertex)
    if total > budget:
        raise BudgetExceeded(f"{total} interface slots exceed budget {budget}")
    return per_vertex


def _assignment_from_mask(per_vertex: list[list[int]], mask: int) -> Assignment:
    active = []
    offset = 0
    for ifaces in per_vertex:
        local = (mask >> offset) & ((1 << len(ifaces)) - 1)
        active.append(frozenset(ifaces[t] for t in range(len(ifaces)) if local >> t & 1))
        offset += len(ifaces)
    return Assignment(tuple(active))


def _feasible_cov(inst: Instance, a: Assignment) -> bool:
    return verify.is_covering(inst, a)[0]


def _feasible_conn(inst: Instance, a: Assignment) -> bool:
    return verify.is_connecting(inst, a)[0]


def _solve_plain(inst: Instance, feasible, budget: int) -> tuple[Fraction, Assignment]:
    per_vertex = _check_budget(inst, budget)
    total = sum(len(s) for s in per_vertex)
    best_cost: Fraction | None = None
    best_a: Assignment | None = None
    for mask in range(1 << total):
        a = _assignment_from_mask(per_vertex, mask)
        if not feasible(inst, a):
            continue
        cost, _ = verify.max_cost(inst, a)
        if best_cost is None or cost < best_cost:
            best_cost, best_a = cost, a
    assert best_cost is not None and best_a is not None, "instance invariants guarantee feasibility"
    return best_cost, best_a


# ---------------------------------------------------------------------------
# Budget-search accelerator
# ---------------------------------------------------------------------------

def _subset_sums(inst: Instance, ifaces: list[int], v: int) -> dict[int, Fraction]:
    """local mask -> subset cost for one vertex."""
    sums = {0: Fraction(0)}
    for t, i in enumerate(ifaces):
        c = inst.cost[(i, v)]
        for mask, s in list(sums.items()):
            sums[mask | (1 << t)] = s + c
    return sums


def _optimistic_sets(inst: Instance, per_vertex: list[list[int]], limit: Fraction) -> list[frozenset[int]]:
    """Relaxed per-vertex activation: every interface of cost <= limit.

    A superset of any affordable subset, so pruning against it is sound.
    """
    return [
        frozenset(i for i in ifaces if inst.cost[(i, v)] <= limit)
        for v, ifaces in enumerate(per_vertex)
    ]


def _connected_groups(inst: Instance, active: list[frozenset[int]]) -> bool:
    uf = verify._UnionFind(inst.n)
    for u, v in inst.edges:
        if active[u] & active[v]:
            uf.union(u, v)
    for group in inst.groups:
        members = sorted(group)
        root = uf.find(members[0])
        if any(uf.find(v) != root for v in members[1:]):
            return False
    return True


def _covers_all(inst: Instance, active: list[frozenset[int]]) -> bool:
    return all(active[u] & active[v] for u, v in inst.edges)


def _feasible_at_budget(
    inst: Instance,
    per_vertex: list[list[int]],
    sums: list[dict[int, Fraction]],
    limit: Fraction,
    connectivity: bool,
) -> bool:
    """Does some assignment with max-cost <= limit satisfy the problem?

    Searches over inclusion-maximal affordable subsets per vertex (coverage
    and connectivity are monotone in activation, so this loses nothing),
    pruning with the optimistic relaxation for undecided vertices.
    """
    optimistic = _optimistic_sets(inst, per_vertex, limit)
    cands: list[list[frozenset[int]]] = []
    for v, ifaces in enumerate(per_vertex):
        affordable = [mask for mask, s in sums[v].items() if s <= limit]
        maximal = [
            m for m in affordable
            if not any(other != m and other & m == m for other in affordable)
        ]
        cands.append(
            sorted(
                frozenset(ifaces[t] for t in range(len(ifaces)) if m >> t & 1)
                for m in maximal
            )
        )

    active = list(optimistic)
    check = _connected_groups if connectivity else _covers_all

    def dfs(v: int) -> bool:
        if v == inst.n:
            return True
        for choice in cands[v]:
            active[v] = choice
            if check(inst, active) and dfs(v + 1):
                return True
        active[v] = optimistic[v]
        return False

    return check(inst, active) and dfs(0)


def _extract_lexmin(
    inst: Instance,
    per_vertex: list[list[int]],
    sums: list[dict[int, Fraction]],
    limit: Fraction,
    connectivity: bool,
) -> Assignment:
    """Lexicographically smallest feasible bitmask with max-cost <= limit.

    Decides vertices from the most significant slots (last vertex) down,
    trying local masks in ascending order; the first feasible leaf found is
    the global minimum.
    """
    optimistic = _optimistic_sets(inst, per_vertex, limit)
    affordable: list[list[int]] = [
        sorted(m for m, s in sums[v].items() if s <= limit) for v in range(inst.n)
    ]
    check = _connected_groups if connectivity else _covers_all
    active = list(optimistic)
    chosen = [0] * inst.n

    def dfs(v: int) -> bool:
        if v < 0:
            return True
        ifaces = per_vertex[v]
        for m in affordable[v]:
            chosen[v] = m
            active[v] = frozenset(ifaces[t] for t in range(len(ifaces)) if m >> t & 1)
            if check(inst, active) and dfs(v - 1):
                return True
        active[v] = optimistic[v]
        return False

    ok = dfs(inst.n - 1)
    assert ok, "extraction must succeed at a feasible budget"
    mask = 0
    offset = 0
    for v in range(inst.n):
        mask |= chosen[v] << offset
        offset += len(per_vertex[v])
    return _assignment_from_mask(per_vertex, mask)


def _solve_budget_search(
    inst: Instance, connectivity: bool, budget: int
) -> tuple[Fraction, Assignment]:
    per_vertex = _check_budget(inst, budget)
    sums = [_subset_sums(inst, per_vertex[v], v) for v in range(inst.n)]
    candidates = sorted({s for table in sums for s in table.values()})

    lo, hi = 0, len(candidates) - 1
    assert _feasible_at_budget(inst, per_vertex, sums, candidates[hi], connectivity), (
        "activating everything must be feasible on a valid instance"
    )
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible_at_budget(inst, per_vertex, sums, candidates[mid], connectivity):
            hi = mid
        else:
            lo = mid + 1
    opt = candidates[lo]
    a = _extract_lexmin(inst, per_vertex, sums, opt, connectivity)
    cost, _ = verify.max_cost(inst, a)
    assert cost == opt
    return opt, a


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def exact_coverage(
    inst: Instance, budget: int = 24, method: str = "auto"
) -> tuple[Fraction, Assignment]:
    """Minimum max-cost covering assignment, exact rational cost."""
    if method == "plain":
        return _solve_plain(inst, _feasible_cov, budget)
    return _solve_budget_search(inst, connectivity=False, budget=budget)


def exact_connectivity(
    inst: Instance, budget: int = 24, method: str = "auto"
) -> tuple[Fraction, Assignment]:
    """Minimum max-cost connecting assignment, exact rational cost."""
    if method == "plain":
        return _solve_plain(inst, _feasible_conn, budget)
    return _solve_budget_search(inst, connectivity=True, budget=budget)
