"""Problem data model: instances, assignments, text format, generator.

Vertices are dense integers ``0..n-1`` and interface identifiers are dense
integers ``1..k``; arbitrary labels appearing in instance files are mapped
to these at parse time.  Activation costs are stored as exact
:class:`~fractions.Fraction` values so that the cost-scaling preprocessing
is bit-exact; conversion to floats happens only inside the LP solver.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Edge = tuple[int, int]


class ParseError(ValueError):
    """Raised on malformed instance/assignment documents."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class InvariantError(ValueError):
    """Raised when a parsed document violates an instance invariant."""


def parse_cost(token: str) -> Fraction:
    """Parse a non-negative cost given as a decimal or ``num/den`` string."""
    try:
        if "/" in token:
            num, den = token.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad cost {token!r}") from exc
    if value < 0:
        raise ValueError(f"negative cost {token!r}")
    return value


def format_cost(value: Fraction) -> str:
    """Render a Fraction as an exact decimal when possible, else ``num/den``."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(value.numerator)
    scaled = value.numerator * 10**digits // value.denominator
    text = str(scaled).rjust(digits + 1, "0")
    return f"{text[:-digits]}.{text[-digits:]}"


@dataclass(frozen=True)
class Instance:
    """An immutable multi-interface network instance.

    Fields:
        labels: vertex labels, position = vertex id.
        edges: unordered vertex pairs stored as (min, max), no duplicates.
        interfaces_of: per-vertex available interface sets.
        cost: (interface, vertex) -> activation cost; defined exactly on
            available interfaces (unavailable = absent, no sentinel).
        groups: pairwise disjoint non-empty terminal groups (empty for
            pure Coverage instances).
    """

    labels: tuple[str, ...]
    edges: tuple[Edge, ...]
    interfaces_of: tuple[frozenset[int], ...]
    cost: dict[tuple[int, int], Fraction]
    groups: tuple[frozenset[int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        """Number of distinct interface identifiers appearing in the instance."""
        seen: set[int] = set()
        for s in self.interfaces_of:
            seen |= s
        return len(seen)

    def common_interfaces(self, u: int, v: int) -> frozenset[int]:
        return self.interfaces_of[u] & self.interfaces_of[v]

    def max_cost_value(self) -> Fraction:
        return max(self.cost.values(), default=Fraction(0))

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass(frozen=True)
class Assignment:
    """Per-vertex sets of activated interfaces."""

    active_of: tuple[frozenset[int], ...]

    def is_empty(self) -> bool:
        return all(not s for s in self.active_of)

    def union(self, other: "Assignment") -> "Assignment":
        return Assignment(tuple(a | b for a, b in zip(self.active_of, other.active_of)))


def empty_assignment(inst: Instance) -> Assignment:
    return Assignment(tuple(frozenset() for _ in range(inst.n)))


def full_assignment(inst: Instance) -> Assignment:
    return Assignment(tuple(inst.interfaces_of))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(inst: Instance) -> list[str]:
    """Return a list of violated invariants (empty list = valid)."""
    violations: list[str] = []
    n = inst.n

    seen_edges: set[Edge] = set()
    for u, v in inst.edges:
        if not (0 <= u < n and 0 <= v < n):
            violations.append(f"edge ({u},{v}) references unknown vertex")
            continue
        if u == v:
            violations.append(f"self-loop at vertex {u}")
            continue
        key = (min(u, v), max(u, v))
        if key in seen_edges:
            violations.append(f"duplicate edge ({u},{v})")
        seen_edges.add(key)
        if not inst.common_interfaces(u, v):
            violations.append(f"edge ({u},{v}) lacks common interface")

    # connectivity via union-find
    if n > 0:
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in inst.edges:
            if 0 <= u < n and 0 <= v < n:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        roots = {find(v) for v in range(n)}
        if len(roots) > 1:
            violations.append("graph not connected")

    # cost defined exactly on available interfaces
    for v in range(n):
        for i in inst.interfaces_of[v]:
            if (i, v) not in inst.cost:
                violations.append(f"missing cost for interface {i} at vertex {v}")
    for (i, v), c in inst.cost.items():
        if not (0 <= v < n) or i not in inst.interfaces_of[v]:
            violations.append(f"cost given for unavailable interface {i} at vertex {v}")
        elif c < 0:
            violations.append(f"negative cost for interface {i} at vertex {v}")

    # groups disjoint, non-empty, in range
    used: set[int] = set()
    for gi, group in enumerate(inst.groups):
        if not group:
            violations.append(f"group {gi} is empty")
        if any(not (0 <= v < n) for v in group):
            violations.append(f"group {gi} references unknown vertex")
        if used & group:
            violations.append("groups not disjoint")
        used |= group

    return violations


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def parse_instance(text: str) -> Instance:
    """Parse the line-based instance format.

    Raises ParseError (with line number) on syntax errors and
    InvariantError when the parsed data violates an instance invariant.
    """
    header: tuple[int, int, int, int] | None = None
    vertex_lines: list[tuple[int, str, list[tuple[str, Fraction]]]] = []
    edge_lines: list[tuple[int, str, str]] = []
    group_lines: list[tuple[int, list[str]]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "header":
            if header is not None:
                raise ParseError("duplicate header", line_no)
            if len(parts) != 5:
                raise ParseError("header needs 4 fields: n m k p", line_no)
            try:
                header = tuple(int(x) for x in parts[1:])  # type: ignore[assignment]
            except ValueError:
                raise ParseError("header fields must be integers", line_no)
        elif kind == "vertex":
            if len(parts) < 3:
                raise ParseError("vertex needs a label and at least one iface:cost", line_no)
            pairs = []
            for token in parts[2:]:
                if ":" not in token:
                    raise ParseError(f"expected iface:cost, got {token!r}", line_no)
                iface, cost_text = token.split(":", 1)
                try:
                    pairs.append((iface, parse_cost(cost_text)))
                except ValueError as exc:
                    raise ParseError(str(exc), line_no)
            vertex_lines.append((line_no, parts[1], pairs))
        elif kind == "edge":
            if len(parts) != 3:
                raise ParseError("edge needs exactly two vertex labels", line_no)
            edge_lines.append((line_no, parts[1], parts[2]))
        elif kind == "group":
            if len(parts) < 2:
                raise ParseError("group needs at least one vertex label", line_no)
            group_lines.append((line_no, parts[1:]))
        else:
            raise ParseError(f"unknown record {kind!r}", line_no)

    if header is None:
        raise ParseError("missing header line")
    n, m, k, p = header

    if len(vertex_lines) != n:
        raise ParseError(f"header declares {n} vertices, found {len(vertex_lines)}")
    if len(edge_lines) != m:
        raise ParseError(f"header declares {m} edges, found {len(edge_lines)}")
    if len(group_lines) != p:
        raise ParseError(f"header declares {p} groups, found {len(group_lines)}")

    # vertex labels -> dense ids, in file order
    vertex_id: dict[str, int] = {}
    for line_no, label, _ in vertex_lines:
        if label in vertex_id:
            raise ParseError(f"duplicate vertex {label!r}", line_no)
        vertex_id[label] = len(vertex_id)

    # interface labels -> dense 1..k (numeric order when possible)
    iface_labels: set[str] = set()
    for _, _, pairs in vertex_lines:
        iface_labels.update(name for name, _ in pairs)
    try:
        ordered = sorted(iface_labels, key=lambda s: (0, int(s)))
    except ValueError:
        ordered = sorted(iface_labels)
    iface_id = {name: idx + 1 for idx, name in enumerate(ordered)}
    if len(iface_id) != k:
        raise ParseError(
            f"header declares {k} interfaces, found {len(iface_id)} distinct identifiers"
        )

    interfaces: list[frozenset[int]] = []
    cost: dict[tuple[int, int], Fraction] = {}
    for line_no, label, pairs in vertex_lines:
        v = vertex_id[label]
        ifaces = set()
        for name, c in pairs:
            i = iface_id[name]
            if i in ifaces:
                raise ParseError(f"duplicate interface {name!r} at vertex {label!r}", line_no)
            ifaces.add(i)
            cost[(i, v)] = c
        interfaces.append(frozenset(ifaces))

    edges: list[Edge] = []
    for line_no, a, b in edge_lines:
        if a not in vertex_id or b not in vertex_id:
            raise ParseError(f"edge references unknown vertex", line_no)
        u, v = vertex_id[a], vertex_id[b]
        if u == v:
            raise ParseError(f"self-loop at {a!r}", line_no)
        edges.append((min(u, v), max(u, v)))

    groups: list[frozenset[int]] = []
    for line_no, members in group_lines:
        ids = set()
        for name in members:
            if name not in vertex_id:
                raise ParseError(f"group references unknown vertex {name!r}", line_no)
            ids.add(vertex_id[name])
        groups.append(frozenset(ids))

    inst = Instance(
        labels=tuple(label for _, label, _ in vertex_lines),
        edges=tuple(edges),
        interfaces_of=tuple(interfaces),
        cost=cost,
        groups=tuple(groups),
    )
    problems = validate(inst)
    if problems:
        raise InvariantError("; ".join(problems))
    return inst


def serialize(inst: Instance) -> str:
    """Serialize an instance; parse(serialize(inst)) reproduces inst exactly."""
    lines = [f"header {inst.n} {inst.m} {inst.k} {len(inst.groups)}"]
    for v in range(inst.n):
        pairs = " ".join(
            f"{i}:{format_cost(inst.cost[(i, v)])}" for i in sorted(inst.interfaces_of[v])
        )
        lines.append(f"vertex {inst.labels[v]} {pairs}")
    for u, v in inst.edges:
        lines.append(f"edge {inst.labels[u]} {inst.labels[v]}")
    for group in inst.groups:
        lines.append("group " + " ".join(inst.labels[v] for v in sorted(group)))
    return "\n".join(lines) + "\n"


def parse_assignment(text: str, inst: Instance) -> Assignment:
    """Parse the `active <vertex> <iface>...` assignment format."""
    vertex_id = {label: v for v, label in enumerate(inst.labels)}
    active: list[set[int]] = [set() for _ in range(inst.n)]
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "active" or len(parts) < 3:
            raise ParseError("expected: active <vertex> <iface> [...]", line_no)
        if parts[1] not in vertex_id:
            raise ParseError(f"unknown vertex {parts[1]!r}", line_no)
        v = vertex_id[parts[1]]
        for token in parts[2:]:
            try:
                i = int(token)
            except ValueError:
                raise ParseError(f"bad interface id {token!r}", line_no)
            if i not in inst.interfaces_of[v]:
                raise ParseError(
                    f"interface {i} not available at vertex {parts[1]!r}", line_no
                )
            active[v].add(i)
    return Assignment(tuple(frozenset(s) for s in active))


def serialize_assignment(a: Assignment, inst: Instance) -> str:
    lines = []
    for v in range(inst.n):
        if a.active_of[v]:
            lines.append(
                f"active {inst.labels[v]} " + " ".join(str(i) for i in sorted(a.active_of[v]))
            )
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Random generator
# ---------------------------------------------------------------------------

class GenerationError(RuntimeError):
    """Raised when the generator cannot produce a valid instance."""


def generate_random(
    n: int,
    k: int,
    edge_density: float,
    cost_range: tuple[Fraction | int | float | str, Fraction | int | float | str],
    num_groups: int = 0,
    group_size: int = 0,
    seed: int = 0,
    max_retries: int = 200,
) -> Instance:
    """Generate a random valid instance, deterministic for a fixed seed.

    A spanning tree is always added so the graph is connected; interface
    sets are resampled (bounded retries) until every sampled edge has a
    common interface.  Costs are uniform on [lo, hi] in steps of 1/100.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    if num_groups * group_size > n:
        raise GenerationError("groups do not fit in the vertex set")
    lo = Fraction(str(cost_range[0])) if isinstance(cost_range[0], (str, float)) else Fraction(cost_range[0])
    hi = Fraction(str(cost_range[1])) if isinstance(cost_range[1], (str, float)) else Fraction(cost_range[1])
    if lo < 0 or hi < lo:
        raise ValueError("bad cost range")

    rng = random.Random(seed)
    for _ in range(max_retries):
        ifaces = [frozenset(rng.sample(range(1, k + 1), rng.randint(1, k))) for _ in range(n)]

        # spanning tree over a random order; each new vertex attaches to a
        # compatible earlier vertex
        order = list(range(n))
        rng.shuffle(order)
        edges: set[Edge] = set()
        ok = True
        for idx in range(1, n):
            v = order[idx]
            candidates = [u for u in order[:idx] if ifaces[u] & ifaces[v]]
            if not candidates:
                ok = False
                break
            u = rng.choice(candidates)
            edges.add((min(u, v), max(u, v)))
        if not ok:
            continue

        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) in edges or not (ifaces[u] & ifaces[v]):
                    continue
                if rng.random() < edge_density:
                    edges.add((u, v))

        steps = (hi - lo) * 100
        cost: dict[tuple[int, int], Fraction] = {}
        for v in range(n):
            for i in ifaces[v]:
                cost[(i, v)] = lo + Fraction(rng.randint(0, int(steps)), 100)

        groups: list[frozenset[int]] = []
        if num_groups:
            pool = list(range(n))
            rng.shuffle(pool)
            for g in range(num_groups):
                groups.append(frozenset(pool[g * group_size : (g + 1) * group_size]))

        # compact interface ids to dense 1..k'
        used = sorted({i for s in ifaces for i in s})
        remap = {old: new + 1 for new, old in enumerate(used)}
        ifaces = [frozenset(remap[i] for i in s) for s in ifaces]
        cost = {(remap[i], v): c for (i, v), c in cost.items()}

        inst = Instance(
            labels=tuple(str(v) for v in range(n)),
            edges=tuple(sorted(edges)),
            interfaces_of=tuple(ifaces),
            cost=cost,
            groups=tuple(groups),
        )
        if not validate(inst):
            return inst
    raise GenerationError(f"no valid instance after {max_retries} retries")
