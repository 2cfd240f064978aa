"""Feasibility and cost auditing of assignments.

Ground-truth implementations of covered-edge computation, the covering and
connecting feasibility checks, and exact max-cost accounting.  Everything
here is a pure function over immutable inputs.
"""

from __future__ import annotations

from fractions import Fraction

from .instance import Assignment, Edge, Instance


def _check_available(inst: Instance, a: Assignment) -> None:
    if len(a.active_of) != inst.n:
        raise ValueError("assignment size does not match instance")
    for v in range(inst.n):
        extra = a.active_of[v] - inst.interfaces_of[v]
        if extra:
            raise ValueError(
                f"assignment activates unavailable interface(s) {sorted(extra)} at vertex {v}"
            )


def covered_edges(inst: Instance, a: Assignment) -> frozenset[Edge]:
    """Edges whose endpoints share at least one active interface."""
    _check_available(inst, a)
    return frozenset(
        (u, v) for u, v in inst.edges if a.active_of[u] & a.active_of[v]
    )


def is_covering(inst: Instance, a: Assignment) -> tuple[bool, list[Edge]]:
    """Verdict plus the list of uncovered edges."""
    cov = covered_edges(inst, a)
    uncovered = [e for e in inst.edges if e not in cov]
    return (not uncovered, uncovered)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def is_connecting(inst: Instance, a: Assignment) -> tuple[bool, dict]:
    """Check that every terminal group lies in one component of G_A.

    Returns (verdict, diagnosis); the diagnosis lists each split group with
    the partition of its terminals into components.
    """
    cov = covered_edges(inst, a)
    uf = _UnionFind(inst.n)
    for u, v in cov:
        uf.union(u, v)

    split: dict[int, list[list[int]]] = {}
    for gi, group in enumerate(inst.groups):
        by_comp: dict[int, list[int]] = {}
        for v in sorted(group):
            by_comp.setdefault(uf.find(v), []).append(v)
        if len(by_comp) > 1:
            split[gi] = sorted(by_comp.values())
    diagnosis = {
        "connected": not split,
        "split_groups": {str(gi): parts for gi, parts in split.items()},
    }
    return (not split, diagnosis)


def vertex_costs(inst: Instance, a: Assignment) -> list[Fraction]:
    """Per-vertex sum of activation costs (exact rationals)."""
    _check_available(inst, a)
    return [
        sum((inst.cost[(i, v)] for i in a.active_of[v]), Fraction(0))
        for v in range(inst.n)
    ]


def max_cost(inst: Instance, a: Assignment) -> tuple[Fraction, list[Fraction]]:
    """Max-cost of an assignment plus the per-vertex breakdown."""
    per_vertex = vertex_costs(inst, a)
    return (max(per_vertex, default=Fraction(0)), per_vertex)
