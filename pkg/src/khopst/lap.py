"""Labeling-anchoring pairs and explicit k-hop Steiner trees.

A labeling maps vertices to depths ``0..k`` or ``INF`` (not in the tree); an
anchoring maps every non-root vertex to its tree parent, with excluded
vertices anchored to themselves.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .metric import INF, Instance, KhopError, Metric, closest


class InfeasibleLabeling(KhopError):
    pass


class NotAKHopTree(KhopError):
    pass


@dataclass(frozen=True)
class LAP:
    labels: Mapping[int, object]
    anchors: Mapping[int, int]

    @property
    def domain(self) -> frozenset:
        return frozenset(self.labels)

    def included(self) -> list[int]:
        return sorted(v for v, lab in self.labels.items() if lab != INF)


@dataclass(frozen=True)
class SteinerTree:
    root: int
    parent: Mapping[int, int]  # child -> parent, root excluded
    depth: Mapping[int, int]

    @property
    def vertices(self) -> list[int]:
        return sorted(self.depth)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((p, c) for c, p in self.parent.items())

    def cost(self, metric: Metric):
        return sum(metric.dist[c][p] for c, p in self.parent.items())

    def height(self) -> int:
        return max(self.depth.values(), default=0)

    def to_lap(self, n: int) -> LAP:
        labels = {v: self.depth.get(v, INF) for v in range(n)}
        anchors = {v: self.parent.get(v, v) for v in range(n) if v != self.root}
        return LAP(labels, anchors)


def validate_lap(instance: Instance, lap: LAP) -> bool:
    """Check the consistency conditions of a (partial) LAP; never raises."""
    r, k = instance.root, instance.k
    domain = lap.domain
    if any(not (0 <= u < instance.n) for u in domain):
        return False
    for u, lab in lap.labels.items():
        if lab != INF and not (isinstance(lab, int) and 0 <= lab <= k):
            return False
        if lab == 0 and u != r:
            return False
    if r in domain and lap.labels[r] != 0:
        return False
    preimage: dict[int, set] = {}
    for u in domain:
        if u == r:
            continue
        if u not in lap.anchors:
            return False
        a = lap.anchors[u]
        preimage.setdefault(a, set()).add(u)
    for u in domain:
        if u == r:
            continue
        lab, a = lap.labels[u], lap.anchors[u]
        if lab != INF and a in domain and lap.labels[a] + 1 != lab:
            return False
    for u in domain:
        if lap.labels[u] != INF:
            continue
        if u in instance.terminals:
            return False
        if u != r and lap.anchors[u] != u:
            return False
        if preimage.get(u, set()) - {u}:
            return False
    return True


def lap_cost(metric: Metric, lap: LAP):
    return sum(metric.dist[u][a] for u, a in lap.anchors.items() if u in lap.labels)


def anchoring_from_labeling(instance: Instance, labeling: Mapping[int, object]) -> LAP:
    """Cheapest anchoring consistent with a labeling on all of V.

    Every finite-labelled vertex is anchored to the closest vertex one level up.
    """
    metric, r = instance.metric, instance.root
    labels = {v: labeling.get(v, INF) for v in range(instance.n)}
    if labels[r] != 0:
        raise InfeasibleLabeling("root must have label 0")
    levels: dict[object, list[int]] = {}
    for v, lab in labels.items():
        levels.setdefault(lab, []).append(v)
    anchors = {}
    for v in range(instance.n):
        if v == r:
            continue
        lab = labels[v]
        if lab == INF:
            if v in instance.terminals:
                raise InfeasibleLabeling(f"terminal {v} is unlabelled")
            anchors[v] = v
            continue
        if lab == 0:
            raise InfeasibleLabeling(f"only the root may have label 0, not {v}")
        parents = levels.get(lab - 1)
        if not parents:
            raise InfeasibleLabeling(f"vertex {v} has label {lab} but level {lab - 1} is empty")
        anchors[v] = closest(metric, v, parents)
    return LAP(labels, anchors)


def lap_to_tree(instance: Instance, lap: LAP) -> SteinerTree:
    r, k, n = instance.root, instance.k, instance.n
    if lap.domain != frozenset(range(n)):
        raise NotAKHopTree("LAP must be defined on every vertex")
    if lap.labels[r] != 0:
        raise NotAKHopTree("root label is not 0")
    parent = {}
    for v in range(n):
        if v == r or lap.labels[v] == INF:
            continue
        a = lap.anchors[v]
        if a == v or lap.labels[a] == INF:
            raise NotAKHopTree(f"vertex {v} is anchored outside the tree")
        parent[v] = a
    for t in instance.terminals:
        if lap.labels[t] == INF:
            raise NotAKHopTree(f"terminal {t} is not covered")
    return tree_from_parents(r, parent, k)


def tree_from_parents(root: int, parent: Mapping[int, int], k: int) -> SteinerTree:
    """Compute depths, rejecting cycles, dangling parents and depth > k."""
    depth = {root: 0}

    def resolve(v: int) -> int:
        chain = []
        while v not in depth:
            if v in chain:
                raise NotAKHopTree(f"cycle through vertex {v}")
            if v not in parent:
                raise NotAKHopTree(f"vertex {v} does not reach the root")
            chain.append(v)
            v = parent[v]
        d = depth[v]
        for u in reversed(chain):
            d += 1
            depth[u] = d
        return depth[chain[0]] if chain else d

    for v in parent:
        resolve(v)
    too_deep = [v for v, d in depth.items() if d > k]
    if too_deep:
        raise NotAKHopTree(f"vertex {min(too_deep)} has depth {depth[min(too_deep)]} > {k}")
    return SteinerTree(root, dict(parent), depth)
