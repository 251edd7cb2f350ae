"""Exact k-hop Steiner trees on path metrics in O(k n^5).

After dropping non-terminals every vertex must be spanned. ``A[p, s, a, e]``
is the cheapest tree of depth <= p rooted at line position ``s`` that spans
the half-open interval ``[a, e)`` with ``s`` outside it. For p > 1 the
right-most child ``s'`` of ``s`` inside the interval splits it into
``[a, c)`` (other children of ``s``), ``[c, s')`` and ``[s'+1, e)`` (the
subtree of ``s'``).

Tables are filled for increasing ``p`` and, inside, for increasing interval
length, which is what the recursion requires. The inner minimum over ``c``
depends only on ``(s, a, s')`` so it is tabulated once as ``D`` and the whole
sweep is vectorised over ``(s, a)`` with numpy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lap import SteinerTree, tree_from_parents
from .metric import Instance, KhopError, minimal_inducing_subgraph


class NotAPathOrder(KhopError):
    pass


@dataclass(frozen=True)
class PathInstance:
    vertices: tuple  # original vertex ids in line order
    coords: tuple  # strictly increasing exact coordinates
    root: int  # position of the root in ``vertices``
    k: int

    @property
    def n(self) -> int:
        return len(self.vertices)


def line_order(instance: Instance) -> list[int]:
    """Vertices of a path metric from one end to the other (smaller-id end first)."""
    metric = instance.metric
    graph = minimal_inducing_subgraph(metric.graph, metric)
    if not graph.is_path():
        raise NotAPathOrder("the minimal inducing graph is not a path")
    if graph.n == 1:
        return [0]
    adj = graph.adjacency()
    start = min(v for v in range(graph.n) if len(adj[v]) == 1)
    order, prev = [start], None
    while len(order) < graph.n:
        cur = order[-1]
        nxt = [u for u, _ in adj[cur] if u != prev]
        prev = cur
        order.append(nxt[0])
    return order


def reduce_to_terminals(instance: Instance, order: list[int] | None = None) -> PathInstance:
    metric = instance.metric
    if order is None:
        order = line_order(instance)
    if sorted(order) != list(range(instance.n)):
        raise NotAPathOrder("order must list every vertex exactly once")
    coords = [metric.dist[order[0]][v] for v in order]
    for i in range(len(order)):
        if i and coords[i] <= coords[i - 1]:
            raise NotAPathOrder("coordinates are not strictly increasing")
        for j in range(i):
            if metric.dist[order[i]][order[j]] != coords[i] - coords[j]:
                raise NotAPathOrder(f"d({order[j]}, {order[i]}) disagrees with the line order")
    kept = [v for v in order if v in instance.terminals]
    kept_coords = tuple(metric.dist[order[0]][v] for v in kept)
    return PathInstance(tuple(kept), kept_coords, kept.index(instance.root), instance.k)


class PathDP:
    """Filled DP tables for one reduced path instance."""

    def __init__(self, coords, k: int):
        c = np.asarray(coords, dtype=np.int64)
        n = len(c)
        self.n = n
        self.k = max(1, min(k, n - 1))
        self.dist = np.abs(c[:, None] - c[None, :])
        # tables[p] is indexed [s, a, e]; index 0 unused
        self.tables: list = [None]
        self.arg_child: list = [None, None]
        self.arg_split: list = [None, None]
        self.tables.append(self._one_hop())
        for p in range(2, self.k + 1):
            table, arg_child, arg_split = self._next_level(self.tables[p - 1])
            self.tables.append(table)
            self.arg_child.append(arg_child)
            self.arg_split.append(arg_split)

    def _one_hop(self) -> np.ndarray:
        n = self.n
        prefix = np.zeros((n, n + 1), dtype=np.int64)
        prefix[:, 1:] = np.cumsum(self.dist, axis=1)
        table = prefix[:, None, :] - prefix[:, :, None]
        return np.maximum(table, 0)

    def _next_level(self, prev: np.ndarray):
        n, d = self.n, self.dist
        table = np.zeros((n, n + 1, n + 1), dtype=np.int64)
        arg_child = np.zeros((n, n + 1, n + 1), dtype=np.int16)
        best_left = np.zeros((n, n + 1, n), dtype=np.int64)
        arg_split = np.zeros((n, n + 1, n), dtype=np.int16)
        for length in range(1, n + 1):
            # best_left[s, a, s'] = min_c table[s, a, c] + prev[s', c, s'],  c in [a, s']
            m = length - 1
            a = np.arange(0, n - m)
            child = a + m
            cs = a[:, None] + np.arange(m + 1)[None, :]
            total = table[:, a[:, None], cs] + prev[child[:, None], cs, child[:, None]][None]
            pick = np.argmin(total, axis=2)
            best_left[:, a, child] = np.take_along_axis(total, pick[..., None], axis=2)[..., 0]
            arg_split[:, a, child] = cs[np.arange(len(a))[None, :], pick]

            a = np.arange(0, n - length + 1)
            e = a + length
            kids = a[:, None] + np.arange(length)[None, :]
            total = (
                d[:, kids]
                + prev[kids, kids + 1, e[:, None]][None]
                + best_left[:, a[:, None], kids]
            )
            pick = np.argmin(total, axis=2)
            table[:, a, e] = np.take_along_axis(total, pick[..., None], axis=2)[..., 0]
            arg_child[:, a, e] = kids[np.arange(len(a))[None, :], pick]
        return table, arg_child, arg_split

    def cell(self, p: int, s: int, a: int, b: int) -> int:
        """Value of the cell for the closed interval ``[a, b]`` (empty when a > b)."""
        if a > b:
            return 0
        if a <= s <= b:
            raise ValueError("s must lie outside [a, b]")
        p = min(p, self.k)
        return int(self.tables[p][s, a, b + 1])

    def optimum(self, root: int) -> int:
        if self.n == 1:
            return 0
        top = self.tables[self.k]
        return int(top[root, 0, root] + top[root, root + 1, self.n])

    def parents(self, root: int) -> dict[int, int]:
        parent: dict[int, int] = {}
        stack = [(self.k, root, 0, root), (self.k, root, root + 1, self.n)]
        while stack:
            p, s, a, e = stack.pop()
            if e <= a:
                continue
            if p == 1:
                for x in range(a, e):
                    parent[x] = s
                continue
            child = int(self.arg_child[p][s, a, e])
            split = int(self.arg_split[p][s, a, child])
            parent[child] = s
            stack.append((p, s, a, split))
            stack.append((p - 1, child, split, child))
            stack.append((p - 1, child, child + 1, e))
        return parent

    @property
    def cells(self) -> int:
        return self.k * self.n * self.n * (self.n + 1) // 2


def solve_path(instance: Instance, order: list[int] | None = None):
    """Optimal cost and tree of a path-metric instance; returns ``(cost, tree, dp)``."""
    reduced = reduce_to_terminals(instance, order)
    dp = PathDP(reduced.coords, reduced.k)
    cost = dp.optimum(reduced.root)
    ids = reduced.vertices
    parent = {ids[c]: ids[p] for c, p in dp.parents(reduced.root).items()}
    tree = tree_from_parents(instance.root, parent, instance.k)
    return cost, tree, dp
