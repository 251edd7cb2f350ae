"""Weighted graphs, exact shortest-path metrics and the closest-vertex primitive.

Costs are exact integers (input weights scaled by ``SCALE``); ``INF`` is the
saturating infinity. Python's ``int + math.inf`` already saturates and
``math.inf`` compares above every int, so plain arithmetic is used.

``BOTTOM`` is the auxiliary vertex at infinite distance from everything.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable

INF = math.inf
BOTTOM = None
SCALE = 10**6
MAX_SCALED = 2**53


class KhopError(Exception):
    """Base class for library errors."""


class DisconnectedGraph(KhopError):
    pass


class NonPositiveWeight(KhopError):
    pass


class InvalidGraph(KhopError):
    pass


class EmptySet(KhopError):
    pass


def parse_weight(text: str) -> int:
    """Scale a decimal literal (at most 6 fractional digits) to an exact int."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"not a decimal weight: {text!r}") from None
    if not value.is_finite():
        raise ValueError(f"not a finite weight: {text!r}")
    scaled = value * SCALE
    if scaled != scaled.to_integral_value():
        raise ValueError(f"weight {text!r} has more than 6 fractional digits")
    scaled = int(scaled)
    if scaled <= 0:
        raise NonPositiveWeight(f"weight {text!r} is not positive")
    if scaled >= MAX_SCALED:
        raise ValueError(f"weight {text!r} is too large")
    return scaled


def format_cost(cost) -> str:
    if cost == INF:
        return "inf"
    if cost % SCALE == 0:
        return str(cost // SCALE)
    return format((Decimal(cost) / SCALE).normalize(), "f")


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple  # ((u, v, w), ...) with u < v

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraph("graph needs at least one vertex")
        seen = set()
        norm = []
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraph(f"edge ({u}, {v}) references an unknown vertex")
            if u == v:
                raise InvalidGraph(f"self-loop at vertex {u}")
            if w <= 0:
                raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidGraph(f"duplicate edge {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "WeightedGraph":
        return cls(n, tuple(tuple(e) for e in edges))

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        for row in adj:
            row.sort()
        return adj

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and _connected(self)

    def is_path(self) -> bool:
        if not self.is_tree():
            return False
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0) <= 2

    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)


def _connected(graph: WeightedGraph) -> bool:
    adj = graph.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == graph.n


def _dijkstra(adj, source: int) -> list:
    dist = [INF] * len(adj)
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


@dataclass(frozen=True, eq=False)
class Metric:
    """All-pairs shortest-path distances of ``graph``.

    ``next_hop[u][v]`` is the smallest-id neighbour of ``u`` that starts a
    shortest u-v path; following it greedily yields the id-lexicographically
    smallest shortest path.
    """

    n: int
    dist: tuple  # tuple of tuples of int
    next_hop: tuple
    graph: WeightedGraph = field(repr=False)

    def d(self, u, v):
        if u is BOTTOM or v is BOTTOM:
            return INF
        return self.dist[u][v]

    def key(self, u: int, x):
        """Total order of candidates around ``u``: distance, then id, BOTTOM last."""
        if x is BOTTOM:
            return (INF, self.n)
        return (self.dist[u][x], x)

    def path(self, u: int, v: int) -> list[int]:
        seq = [u]
        while seq[-1] != v:
            seq.append(self.next_hop[seq[-1]][v])
        return seq

    def diameter(self) -> int:
        return max(max(row) for row in self.dist)


def build_metric(graph: WeightedGraph) -> Metric:
    adj = graph.adjacency()
    dist = [_dijkstra(adj, s) for s in range(graph.n)]
    for s, row in enumerate(dist):
        for t, value in enumerate(row):
            if value == INF:
                raise DisconnectedGraph(f"vertex {t} is unreachable from {s}")
    next_hop = []
    for u in range(graph.n):
        row = [u] * graph.n
        for v in range(graph.n):
            if v == u:
                continue
            # adj[u] is sorted by neighbour id, so the first match is the lexicographic choice
            for x, w in adj[u]:
                if w + dist[x][v] == dist[u][v]:
                    row[v] = x
                    break
        next_hop.append(tuple(row))
    return Metric(graph.n, tuple(tuple(r) for r in dist), tuple(next_hop), graph)


def minimal_inducing_subgraph(graph: WeightedGraph, metric: Metric) -> WeightedGraph:
    """Drop every edge that some other path of length <= its weight replaces."""
    dist = metric.dist
    kept = []
    for u, v, w in graph.edges:
        redundant = any(
            dist[u][x] + dist[x][v] <= w for x in range(graph.n) if x != u and x != v
        )
        if not redundant:
            kept.append((u, v, w))
    return WeightedGraph(graph.n, tuple(kept))


def closest(metric: Metric, v: int, candidates: Iterable):
    """Element of ``candidates`` closest to ``v``; ties go to the smaller id, BOTTOM loses."""
    best = _MISSING = object()
    best_key = None
    for x in candidates:
        k = metric.key(v, x)
        if best is _MISSING or k < best_key:
            best, best_key = x, k
    if best is _MISSING:
        raise EmptySet("closest() needs a nonempty candidate set")
    return best


def closest_or_bottom(metric: Metric, v: int, candidates: Iterable):
    """Like :func:`closest`, but an empty candidate set yields BOTTOM."""
    best = BOTTOM
    best_key = (INF, metric.n)
    for x in candidates:
        k = metric.key(v, x)
        if k < best_key:
            best, best_key = x, k
    return best


@dataclass(frozen=True, eq=False)
class Instance:
    metric: Metric
    terminals: frozenset
    root: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("hop bound k must be at least 1")
        if self.root not in self.terminals:
            raise ValueError("root must be a terminal")
        if not all(0 <= t < self.metric.n for t in self.terminals):
            raise ValueError("terminal out of range")

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def graph(self) -> WeightedGraph:
        return self.metric.graph

    def with_k(self, k: int) -> "Instance":
        return Instance(self.metric, self.terminals, self.root, k)

    def with_terminals(self, terminals) -> "Instance":
        return Instance(self.metric, frozenset(terminals), self.root, self.k)


def make_instance(
    n: int, edges: Iterable, terminals: Iterable, root: int, k: int
) -> Instance:
    graph = WeightedGraph.from_edges(n, edges)
    return Instance(build_metric(graph), frozenset(terminals), root, k)


def restrict(metric: Metric, vertices: Iterable[int]) -> tuple[Metric, list[int]]:
    """Metric on a vertex subset, relabelled 0..m-1 in increasing original id.

    The inducing graph is the minimal inducing subgraph of the metric closure
    on the subset. Returns the metric and the list mapping new id -> old id.
    """
    keep = sorted(set(vertices))
    m = len(keep)
    closure = WeightedGraph(
        m,
        tuple(
            (a, b, metric.dist[keep[a]][keep[b]])
            for a in range(m)
            for b in range(a + 1, m)
        ),
    )
    sub = build_metric(closure)
    minimal = minimal_inducing_subgraph(closure, sub)
    return build_metric(minimal), keep
