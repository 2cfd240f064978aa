"""Max-flow / min-cut on capacitated undirected graphs.

Shortest-augmenting-path (BFS) max-flow on the standard transformation of
an undirected edge into a pair of opposite arcs, each carrying the edge
capacity.  The returned cut is canonical: the side containing the source
is the set of vertices reachable from it in the final residual graph,
which makes the result deterministic and scale-free.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .instance import Edge


@dataclass(frozen=True)
class CapGraph:
    """Undirected graph with non-negative finite edge capacities."""

    n: int
    edges: tuple[tuple[int, int, float], ...]  # (u, v, capacity)


@dataclass(frozen=True)
class Cut:
    """A vertex bipartition with its crossing edges and capacity value."""

    side_s: frozenset[int]
    crossing_edges: tuple[Edge, ...]
    value: float


def max_flow_min_cut(g: CapGraph, s: int, t: int) -> tuple[float, Cut]:
    """Return (max flow value, minimum s-t cut); flow equals cut value."""
    if s == t:
        raise ValueError("source equals sink")
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ValueError("source/sink not in graph")

    # arc storage: to[a], cap[a]; arc a^1 is the reverse of arc a
    to: list[int] = []
    cap: list[float] = []
    adj: list[list[int]] = [[] for _ in range(g.n)]

    for u, v, c in g.edges:
        if c < 0:
            raise ValueError("negative capacity")
        adj[u].append(len(to))
        to.append(v)
        cap.append(float(c))
        adj[v].append(len(to))
        to.append(u)
        cap.append(float(c))

    flow = 0.0
    while True:
        # BFS for a shortest augmenting path
        prev_arc = [-1] * g.n
        prev_arc[s] = -2
        queue = deque([s])
        while queue and prev_arc[t] == -1:
            u = queue.popleft()
            for a in adj[u]:
                if cap[a] > 1e-12 and prev_arc[to[a]] == -1:
                    prev_arc[to[a]] = a
                    queue.append(to[a])
        if prev_arc[t] == -1:
            break
        # bottleneck along the path
        bottleneck = float("inf")
        v = t
        while v != s:
            a = prev_arc[v]
            bottleneck = min(bottleneck, cap[a])
            v = to[a ^ 1]
        v = t
        while v != s:
            a = prev_arc[v]
            cap[a] -= bottleneck
            cap[a ^ 1] += bottleneck
            v = to[a ^ 1]
        flow += bottleneck

    # canonical cut: residual-reachable side of s
    reachable = [False] * g.n
    reachable[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for a in adj[u]:
            if cap[a] > 1e-12 and not reachable[to[a]]:
                reachable[to[a]] = True
                queue.append(to[a])

    crossing: list[Edge] = []
    value = 0.0
    for u, v, c in g.edges:
        if reachable[u] != reachable[v]:
            crossing.append((min(u, v), max(u, v)))
            value += float(c)
    cut = Cut(
        side_s=frozenset(v for v in range(g.n) if reachable[v]),
        crossing_edges=tuple(sorted(crossing)),
        value=value,
    )
    return flow, cut
