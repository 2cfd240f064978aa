"""Shared fixtures-by-hand for the test suite: small canonical instances."""

from __future__ import annotations

from fractions import Fraction

from mina.instance import Assignment, Instance


def build_instance(
    ifaces: dict[str, set[int]],
    edges: list[tuple[str, str]],
    costs: dict[tuple[int, str], object] | None = None,
    groups: list[set[str]] | None = None,
    default_cost: object = 1,
) -> Instance:
    """Construct an Instance from labelled data; costs default to 1."""
    labels = list(ifaces)
    vid = {label: i for i, label in enumerate(labels)}
    cost: dict[tuple[int, int], Fraction] = {}
    for label, available in ifaces.items():
        for i in available:
            raw = default_cost
            if costs and (i, label) in costs:
                raw = costs[(i, label)]
            cost[(i, vid[label])] = Fraction(str(raw)) if isinstance(raw, float) else Fraction(raw)
    edge_ids = tuple(
        (min(vid[a], vid[b]), max(vid[a], vid[b])) for a, b in edges
    )
    group_ids = tuple(
        frozenset(vid[x] for x in g) for g in (groups or [])
    )
    return Instance(
        labels=tuple(labels),
        edges=edge_ids,
        interfaces_of=tuple(frozenset(ifaces[label]) for label in labels),
        cost=cost,
        groups=group_ids,
    )


def assignment_of(inst: Instance, active: dict[str, set[int]]) -> Assignment:
    vid = {label: i for i, label in enumerate(inst.labels)}
    sets = [frozenset() for _ in range(inst.n)]
    for label, ifs in active.items():
        sets[vid[label]] = frozenset(ifs)
    return Assignment(tuple(sets))


def triangle() -> Instance:
    """Unit-cost triangle where everyone shares interface 1."""
    return build_instance(
        {"a": {1}, "b": {1}, "c": {1}},
        [("a", "b"), ("b", "c"), ("a", "c")],
    )


def star(k: int) -> Instance:
    """Center holds interfaces 1..k at unit cost, leaf j holds {j}."""
    ifaces = {"c": set(range(1, k + 1))}
    edges = []
    for j in range(1, k + 1):
        ifaces[f"l{j}"] = {j}
        edges.append(("c", f"l{j}"))
    return build_instance(ifaces, edges)


def path3(groups: bool = True) -> Instance:
    """Path a-b-c; the endpoints form a terminal group when asked."""
    return build_instance(
        {"a": {1, 2}, "b": {1, 2}, "c": {2}},
        [("a", "b"), ("b", "c")],
        costs={(1, "a"): 1, (2, "a"): 3, (1, "b"): 1, (2, "b"): 1, (2, "c"): 2},
        groups=[{"a", "c"}] if groups else None,
    )


# A 10-vertex, 18-edge, 4-interface demo network: a 9-cycle with a hub
# adjacent to six of the ring vertices plus three chords.
_DEMO_EDGES = [
    ("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5"), ("v5", "v6"),
    ("v6", "v7"), ("v7", "v8"), ("v8", "v9"), ("v9", "v1"),
    ("v1", "v10"), ("v2", "v10"), ("v3", "v10"), ("v4", "v10"),
    ("v7", "v10"), ("v8", "v10"),
    ("v2", "v8"), ("v3", "v7"), ("v4", "v6"),
]


def demo_cover() -> Instance:
    """The demo network with interface sets admitting a full covering."""
    return build_instance(
        {
            "v1": {1, 2}, "v2": {1, 3}, "v3": {2, 3, 4}, "v4": {2, 4},
            "v5": {1, 4}, "v6": {1, 2, 4}, "v7": {2, 3}, "v8": {1, 3, 4},
            "v9": {1, 2, 3}, "v10": {2, 3},
        },
        _DEMO_EDGES,
    )


def demo_cover_assignment(inst: Instance) -> Assignment:
    """A hand-picked covering assignment for demo_cover."""
    return assignment_of(
        inst,
        {
            "v1": {1, 2}, "v2": {1, 3}, "v3": {2, 3, 4}, "v4": {2, 4},
            "v5": {1, 4}, "v6": {1, 2}, "v7": {2, 3}, "v8": {1, 3},
            "v9": {1}, "v10": {2, 3},
        },
    )


def demo_connect() -> Instance:
    """Same topology, different interface sets, two terminal groups."""
    return build_instance(
        {
            "v1": {1, 2}, "v2": {1, 3}, "v3": {2, 3, 4}, "v4": {2, 4},
            "v5": {1, 4}, "v6": {1, 2, 4}, "v7": {3, 4}, "v8": {1, 3, 4},
            "v9": {1, 2, 3}, "v10": {2, 3},
        },
        _DEMO_EDGES,
        groups=[{"v1", "v5", "v8"}, {"v3", "v7"}],
    )


def demo_connect_assignment(inst: Instance) -> Assignment:
    """A hand-picked connecting assignment for demo_connect."""
    return assignment_of(
        inst,
        {
            "v1": {2}, "v3": {4}, "v4": {2, 4}, "v5": {4},
            "v7": {4}, "v8": {3}, "v10": {2, 3},
        },
    )
