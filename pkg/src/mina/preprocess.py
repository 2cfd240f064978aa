"""Cost-scaling preprocessing and the restart wrapper.

A guess ``b`` hypothesizes that the costliest interface activated by an
optimal solution costs at most ``2**b``.  For each non-discarded guess the
surviving costs are normalized into [0, 1] (exact rational arithmetic) and
vertices are classified as cheap (total normalized cost < 1) or expensive.
Randomized solve procedures are repeated K times per guess with derived
seeds, and the cheapest feasible assignment across all guesses and runs
wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import verify
from .instance import Assignment, Instance
from .seeding import mix64

Procedure = Callable[["ScaledInstance", int], tuple[Assignment, bool]]


@dataclass(frozen=True)
class ScaledInstance:
    """An Instance viewed under one guess b of the preprocessing.

    ``scaled_cost`` maps kept (interface, vertex) pairs to original cost
    divided by ``norm_factor`` (= the maximum kept cost); unavailable or
    dropped interfaces are simply absent.  ``b`` is None for the identity
    view used by algorithms that skip preprocessing.
    """

    base: Instance
    b: int | None
    kept_of: tuple[frozenset[int], ...]
    norm_factor: Fraction
    scaled_cost: dict[tuple[int, int], Fraction]
    cheap: frozenset[int]

    def is_cheap(self, v: int) -> bool:
        return v in self.cheap

    def common_kept(self, u: int, v: int) -> frozenset[int]:
        return self.kept_of[u] & self.kept_of[v]


def _build_scaled(inst: Instance, b: int | None, limit: Fraction | None) -> ScaledInstance:
    kept = []
    for v in range(inst.n):
        keep = frozenset(
            i for i in inst.interfaces_of[v] if limit is None or inst.cost[(i, v)] <= limit
        )
        kept.append(keep)
    kept_costs = [inst.cost[(i, v)] for v in range(inst.n) for i in kept[v]]
    norm = max(kept_costs, default=Fraction(0))
    if norm == 0:
        norm = Fraction(1)  # all-zero costs: nothing to normalize
    scaled = {(i, v): inst.cost[(i, v)] / norm for v in range(inst.n) for i in kept[v]}
    cheap = frozenset(
        v
        for v in range(inst.n)
        if sum((scaled[(i, v)] for i in kept[v]), Fraction(0)) < 1
    )
    return ScaledInstance(inst, b, tuple(kept), norm, scaled, cheap)


def identity_scaled(inst: Instance) -> ScaledInstance:
    """Unscaled view: every interface kept, original costs, nobody cheap."""
    kept = tuple(inst.interfaces_of)
    scaled = dict(inst.cost)
    return ScaledInstance(inst, None, kept, Fraction(1), scaled, frozenset())


def guess_count(inst: Instance) -> int:
    """C = ceil(log2(max cost)), 0 when the max cost is at most 1."""
    cmax = inst.max_cost_value()
    if cmax <= 1:
        return 0
    c = 0
    power = Fraction(1)
    while power < cmax:
        power *= 2
        c += 1
    return c


def discard_guess(inst: Instance, b: int) -> bool:
    """True iff guess b must be discarded.

    (a) some edge has no common interface with both endpoint costs <= 2^b;
    (b) for b >= 1, the maximum kept cost does not exceed 2^(b-1), i.e. b
        is not the minimal guess compatible with its own kept set.
    """
    if b < 0:
        raise ValueError("b must be >= 0")
    limit = Fraction(2) ** b
    kept_max = Fraction(0)
    for u, v in inst.edges:
        coverable = False
        for i in inst.common_interfaces(u, v):
            if inst.cost[(i, u)] <= limit and inst.cost[(i, v)] <= limit:
                coverable = True
                break
        if not coverable:
            return True
    for (i, v), c in inst.cost.items():
        if c <= limit and c > kept_max:
            kept_max = c
    if b >= 1 and kept_max <= Fraction(2) ** (b - 1):
        return True
    return False


def enumerate_guesses(inst: Instance) -> list[ScaledInstance]:
    """All non-discarded guesses in ascending b order (may be empty)."""
    out = []
    for b in range(guess_count(inst) + 1):
        if not discard_guess(inst, b):
            out.append(_build_scaled(inst, b, Fraction(2) ** b))
    return out


def num_restarts(inst: Instance, restarts_floor: int = 3) -> int:
    """K = ceil(ln C / ln m + 1), clamped to at least the restart floor.

    The formula degenerates at small scale (m <= 2 or C <= 1), where it
    collapses to a single run; the floor keeps a few restarts anyway.
    """
    c = guess_count(inst)
    if inst.m <= 2 or c <= 1:
        k = 1
    else:
        k = max(1, math.ceil(math.log(c) / math.log(inst.m) + 1))
    return max(k, restarts_floor)


def run_with_restarts(
    inst: Instance,
    procedure: Procedure,
    seed: int,
    restarts_floor: int = 3,
) -> tuple[Assignment | None, dict]:
    """Run a randomized procedure over all kept guesses with restarts.

    The procedure receives a ScaledInstance and a derived 64-bit seed and
    returns (assignment, feasible).  The feasible assignment with minimum
    original-scale max-cost wins; ties break toward smaller b, then smaller
    run index.  Returns (None, info) when nothing verified.
    """
    guesses = enumerate_guesses(inst)
    runs = num_restarts(inst, restarts_floor)
    best: Assignment | None = None
    best_cost: Fraction | None = None
    best_b: int | None = None
    info = {"guesses": [s.b for s in guesses], "runs_per_guess": runs, "trials": 0}
    for scaled in guesses:
        assert scaled.b is not None
        for run in range(runs):
            run_seed = mix64(seed, scaled.b, run)
            assignment, feasible = procedure(scaled, run_seed)
            info["trials"] += 1
            if not feasible:
                continue
            cost, _ = verify.max_cost(inst, assignment)
            if best_cost is None or cost < best_cost:
                best, best_cost, best_b = assignment, cost, scaled.b
    info["best_b"] = best_b
    info["best_cost"] = best_cost
    return best, info
