"""Exact k-hop Steiner trees on tree metrics in n^O(k).

A cell ``(v, rho, phi)`` holds the cheapest labeling of the subtree ``T[v]``
given, for every label ``i`` in ``1..k-1``:

* ``phi[i-1]``: the vertex of label ``i`` in ``T[v]`` closest to ``v``
  (``BOTTOM`` if there is none), which the labeling must realise exactly;
* ``rho[i-1]``: a vertex of label ``i`` outside ``T[v]`` that vertices of
  ``T[v]`` may anchor to.

Label 0 is always the root outside and never inside. Label ``k`` is not
tracked because nothing anchors to it; a terminal that no ``phi`` names
takes label ``k``. "Closest" uses the total order (distance, id).
"""
from __future__ import annotations

import itertools
import sys

from .lap import LAP, lap_cost, lap_to_tree
from .metric import BOTTOM, INF, Instance, KhopError, closest, minimal_inducing_subgraph


class NotATreeMetric(KhopError):
    pass


class TreeDP:
    def __init__(self, instance: Instance):
        self.instance = instance
        self.metric = instance.metric
        self.root = instance.root
        self.k = instance.k
        graph = minimal_inducing_subgraph(self.metric.graph, self.metric)
        if not graph.is_tree():
            raise NotATreeMetric("the minimal inducing graph is not a tree")
        adj = graph.adjacency()
        self.children: dict[int, list[int]] = {v: [] for v in range(instance.n)}
        order, seen = [self.root], {self.root}
        for v in order:
            for u, _ in adj[v]:
                if u not in seen:
                    seen.add(u)
                    self.children[v].append(u)
                    order.append(u)
        self.subtree: dict[int, frozenset] = {}
        for v in reversed(order):
            below = {v}
            for c in self.children[v]:
                below |= self.subtree[c]
            self.subtree[v] = frozenset(below)
        self.memo: dict = {}
        self.choice: dict = {}

    def _key(self, v, x):
        return self.metric.key(v, x)

    def _label_and_cost(self, v, rho, phi):
        hits = [i for i, f in enumerate(phi, start=1) if f == v]
        if len(hits) > 1:
            return None, INF
        if hits:
            label = hits[0]
        elif v in self.instance.terminals:
            label = self.k
        else:
            return INF, 0
        if label == 1:
            anchor = self.root
        else:
            anchor = closest(self.metric, v, (rho[label - 2], phi[label - 2]))
        return label, self.metric.d(v, anchor)

    def anchor_cost(self, v, rho, phi):
        """Cost of anchoring ``v`` itself under the given guarantees."""
        return self._label_and_cost(v, tuple(rho), tuple(phi))[1]

    def child_phi_candidates(self, v, child, phi_i) -> tuple:
        sub = self.subtree[child]
        if phi_i is BOTTOM:
            return (BOTTOM,)
        if phi_i in sub:
            return (phi_i,)
        bound = self._key(v, phi_i)
        farther = sorted((w for w in sub if self._key(v, w) > bound), key=lambda w: self._key(v, w))
        return tuple(farther) + (BOTTOM,)

    def child_rho(self, v, child, rho_i, phi_i):
        if phi_i is BOTTOM or phi_i in self.subtree[child]:
            return rho_i
        return closest(self.metric, v, (rho_i, phi_i))

    def cell(self, v, rho, phi):
        rho, phi = tuple(rho), tuple(phi)
        key = (v, rho, phi)
        if key in self.memo:
            return self.memo[key]
        sub = self.subtree[v]
        if any(f is not BOTTOM and f not in sub for f in phi):
            raise ValueError(f"phi entries must lie in the subtree of {v}")
        if any(g is not BOTTOM and g in sub for g in rho):
            raise ValueError(f"rho entries must lie outside the subtree of {v}")
        real = [f for f in phi if f is not BOTTOM]
        if len(real) != len(set(real)):
            self.memo[key] = INF
            return INF
        _, total = self._label_and_cost(v, rho, phi)
        picks = []
        for child in self.children[v]:
            if total == INF:
                break
            child_rho = tuple(self.child_rho(v, child, g, f) for g, f in zip(rho, phi))
            options = [self.child_phi_candidates(v, child, f) for f in phi]
            best, best_phi = INF, None
            for combo in itertools.product(*options):
                value = self.cell(child, child_rho, combo)
                if value < best:
                    best, best_phi = value, combo
            total += best
            picks.append((child, child_rho, best_phi))
        self.memo[key] = total
        if total != INF:
            self.choice[key] = picks
        return total

    def solve(self):
        """Return ``(cost, lap)`` of an optimal k-hop Steiner tree."""
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 10 * self.instance.n + 1000))
        try:
            empty = (BOTTOM,) * (self.k - 1)
            total, picks = 0, []
            for child in self.children[self.root]:
                pool = sorted(self.subtree[child], key=lambda w: self._key(self.root, w))
                options = [tuple(pool) + (BOTTOM,)] * (self.k - 1)
                best, best_phi = INF, None
                for combo in itertools.product(*options):
                    value = self.cell(child, empty, combo)
                    if value < best:
                        best, best_phi = value, combo
                total += best
                picks.append((child, empty, best_phi))
        finally:
            sys.setrecursionlimit(limit)
        labels = {self.root: 0}
        anchors: dict[int, int] = {}
        stack = list(picks)
        while stack:
            v, rho, phi = stack.pop()
            label, _ = self._label_and_cost(v, rho, phi)
            labels[v] = label
            if label == INF:
                anchors[v] = v
            elif label == 1:
                anchors[v] = self.root
            else:
                anchors[v] = closest(self.metric, v, (rho[label - 2], phi[label - 2]))
            stack.extend(self.choice[(v, rho, phi)])
        return total, LAP(labels, anchors)

    @property
    def cells(self) -> int:
        return len(self.memo)


def solve_tree(instance: Instance):
    """Optimal cost and tree of a tree-metric instance; returns ``(cost, tree, dp)``."""
    dp = TreeDP(instance)
    cost, lap = dp.solve()
    tree = lap_to_tree(instance, lap)
    assert lap_cost(instance.metric, lap) == cost
    return cost, tree, dp
