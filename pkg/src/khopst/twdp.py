"""Exact k-hop Steiner trees over a nice tree decomposition in n^O(wk).

A cell is ``(node, rho, phi)``. For the sorted bag ``S`` of the node, ``phi``
and ``rho`` hold one row per bag vertex ``u`` and one column per label
``i = 1..k-1``:

* ``phi[u][i-1]`` is the vertex of label ``i`` in the below-set ``C`` that is
  closest to ``u`` (``BOTTOM`` when ``C`` has none);
* ``rho[u][i-1]`` is a vertex of label ``i`` outside ``C`` that ``u`` may use.

The value is the cheapest labeling of ``C`` that realises every ``phi`` entry,
where each vertex of ``C`` pays, at its forget node, its distance to the
closer of its own ``phi`` and ``rho`` entry one label up. Label ``k`` is not
tracked (nothing anchors to it) and stays available to any forgotten vertex.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

from .decomposition import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    heuristic_decompose,
    make_nice,
)
from .lap import LAP, lap_cost, lap_to_tree
from .metric import BOTTOM, INF, Instance, KhopError, closest_or_bottom


class InfeasibleInstance(KhopError):
    pass


class BudgetExceeded(KhopError):
    pass


def state_space(n: int, k: int, max_bag: int) -> int:
    """Rough cell count bound used by the CLI guard."""
    return (n + 2) ** (2 * (k - 1) * max_bag)


@dataclass
class Charge:
    vertex: int
    label: object
    anchor: int
    cost: object
    where: str  # "forget" or "root"


class TreeWidthDP:
    def __init__(self, instance: Instance, nice: NiceTreeDecomposition):
        self.instance = instance
        self.metric = instance.metric
        self.k = instance.k
        self.K = instance.k - 1
        self.nice = nice
        if instance.root not in nice.nodes[nice.root].bag:
            raise ValueError("the root bag must contain the root vertex")
        self.bags = [tuple(sorted(node.bag)) for node in nice.nodes]
        self.memo: dict = {}
        self.choice: dict = {}

    # -- helpers -------------------------------------------------------------
    def _key(self, u, x):
        return self.metric.key(u, x)

    def _violates_c_prime(self, bag, rho) -> bool:
        d = self.metric.d
        for i in range(self.K):
            for a, u in enumerate(bag):
                own = d(u, rho[a][i])
                for b in range(len(bag)):
                    if own > d(u, rho[b][i]):
                        return True
        return False

    def _anchor(self, v, label, rho_v, phi_v):
        if label == 1:
            return self.instance.root
        return closest_or_bottom(self.metric, v, (phi_v[label - 2], rho_v[label - 2]))

    def _pool(self, node):
        return sorted(self.nice.nodes[node].below)

    def _filtered(self, candidates, bag, phi, i):
        """Candidates that no bag vertex's ``phi`` entry for label ``i`` contradicts."""
        out = []
        for x in candidates:
            ok = True
            for a, z in enumerate(bag):
                f = phi[a][i]
                if x != f and self._key(z, x) <= self._key(z, f):
                    ok = False
                    break
            if ok:
                out.append(x)
        return out

    # -- recurrences ---------------------------------------------------------
    def bag_cell(self, node: int, rho, phi):
        rho = tuple(tuple(row) for row in rho)
        phi = tuple(tuple(row) for row in phi)
        key = (node, rho, phi)
        if key in self.memo:
            return self.memo[key]
        bag = self.bags[node]
        if self._violates_c_prime(bag, rho):
            value, picks = INF, None
        else:
            kind = self.nice.nodes[node].kind
            if kind == LEAF:
                value, picks = 0, ()
            elif kind == INTRODUCE:
                value, picks = self._introduce(node, bag, rho, phi)
            elif kind == FORGET:
                value, picks = self._forget(node, bag, rho, phi)
            else:
                value, picks = self._join(node, bag, rho, phi)
        self.memo[key] = value
        if value != INF:
            self.choice[key] = picks
        return value

    def _introduce(self, node, bag, rho, phi):
        nd = self.nice.nodes[node]
        child = nd.children[0]
        v = nd.vertex
        pos = bag.index(v)
        others = [a for a in range(len(bag)) if a != pos]
        for i in range(self.K):
            want = closest_or_bottom(self.metric, v, (phi[a][i] for a in others))
            if phi[pos][i] != want:
                return INF, None
        child_rho = tuple(rho[a] for a in others)
        child_phi = tuple(phi[a] for a in others)
        value = self.bag_cell(child, child_rho, child_phi)
        return value, ((child, child_rho, child_phi),)

    def _labels_for(self, v, bag, phi):
        hits = {i for i in range(self.K) for a in range(len(bag)) if phi[a][i] == v}
        if len(hits) > 1:
            return []
        if hits:
            (i,) = hits
            ok = all(
                phi[a][i] == v or self._key(u, phi[a][i]) < self._key(u, v)
                for a, u in enumerate(bag)
            )
            return [i + 1] if ok else []
        labels = [
            i + 1
            for i in range(self.K)
            if all(self._key(u, phi[a][i]) < self._key(u, v) for a, u in enumerate(bag))
        ]
        labels.append(self.k)
        if v not in self.instance.terminals:
            labels.append(INF)
        return labels

    def _forget(self, node, bag, rho, phi):
        nd = self.nice.nodes[node]
        child = nd.children[0]
        v = nd.vertex
        child_bag = self.bags[child]
        vpos = child_bag.index(v)
        pool = self._pool(child) + [BOTTOM]
        best, best_pick = INF, None
        for label in self._labels_for(v, bag, phi):
            t = label - 1 if label != INF else None  # tracked column of v's label
            # rho rows for the child bag
            rows_rho = []
            for a, u in enumerate(bag):
                row = list(rho[a])
                if t is not None and t < self.K:
                    row[t] = closest_or_bottom(self.metric, u, (row[t], v))
                rows_rho.append(tuple(row))
            v_rho = [closest_or_bottom(self.metric, v, (rho[a][i] for a in range(len(bag)))) for i in range(self.K)]
            if t is not None and t < self.K:
                v_rho[t] = v
            rows_rho.insert(vpos, tuple(v_rho))
            child_rho = tuple(rows_rho)
            # phi options per (row, column)
            options = []
            for a, u in enumerate(bag):
                row_opts = []
                for i in range(self.K):
                    if phi[a][i] == v:
                        row_opts.append([x for x in pool if self._key(u, x) > self._key(u, v)])
                    else:
                        row_opts.append([phi[a][i]])
                options.append(row_opts)
            v_opts = [self._filtered(pool, bag, phi, i) for i in range(self.K)]
            options.insert(vpos, v_opts)
            flat = [opts for row in options for opts in row]
            for combo in itertools.product(*flat):
                child_phi = tuple(
                    tuple(combo[a * self.K:(a + 1) * self.K]) for a in range(len(child_bag))
                )
                value = self.bag_cell(child, child_rho, child_phi)
                if value == INF:
                    continue
                if label == INF:
                    charge = 0
                else:
                    anchor = self._anchor(v, label, child_rho[vpos], child_phi[vpos])
                    charge = self.metric.d(v, anchor)
                if value + charge < best:
                    best, best_pick = value + charge, (label, (child, child_rho, child_phi))
        return best, best_pick

    def _join(self, node, bag, rho, phi):
        total, picks = 0, []
        for child in self.nice.nodes[node].children:
            below = self.nice.nodes[child].below
            pool = sorted(below) + [BOTTOM]
            child_rho = []
            for a, u in enumerate(bag):
                row = []
                for i in range(self.K):
                    cands = [rho[a][i]] + [
                        phi[b][i] for b in range(len(bag))
                        if phi[b][i] is not BOTTOM and phi[b][i] not in below
                    ]
                    row.append(closest_or_bottom(self.metric, u, cands))
                child_rho.append(tuple(row))
            child_rho = tuple(child_rho)
            shared = [self._filtered(pool, bag, phi, i) for i in range(self.K)]
            flat = []
            for a in range(len(bag)):
                for i in range(self.K):
                    f = phi[a][i]
                    flat.append([f] if f is not BOTTOM and f in below else shared[i])
            best, best_phi = INF, None
            for combo in itertools.product(*flat):
                child_phi = tuple(tuple(combo[a * self.K:(a + 1) * self.K]) for a in range(len(bag)))
                value = self.bag_cell(child, child_rho, child_phi)
                if value < best:
                    best, best_phi = value, child_phi
            if best == INF:
                return INF, None
            total += best
            picks.append((child, child_rho, best_phi))
        return total, tuple(picks)

    # -- root extraction -----------------------------------------------------
    def solve(self):
        """Return ``(cost, lap, charges)``; charges list every anchoring payment."""
        r = self.instance.root
        root = self.nice.root
        bag = self.bags[root]
        free = [w for w in bag if w != r]
        pool = self._pool(root) + [BOTTOM]
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20 * len(self.nice.nodes) + 1000))
        best = (INF, None, None, None)
        try:
            label_options = [
                list(range(1, self.k + 1)) + ([] if w in self.instance.terminals else [INF])
                for w in free
            ]
            for labels in itertools.product(*label_options):
                lbar = dict(zip(free, labels))
                lbar[r] = 0
                rho = tuple(
                    tuple(
                        closest_or_bottom(self.metric, v, (w for w in bag if lbar[w] == i))
                        for i in range(1, self.k)
                    )
                    for v in bag
                )
                for combo in itertools.product(*([pool] * (self.K * len(bag)))):
                    phi = tuple(tuple(combo[a * self.K:(a + 1) * self.K]) for a in range(len(bag)))
                    extra = 0
                    for a, v in enumerate(bag):
                        if v == r or lbar[v] == INF:
                            continue
                        extra += self.metric.d(v, self._anchor(v, lbar[v], rho[a], phi[a]))
                    if extra >= best[0]:
                        continue
                    value = self.bag_cell(root, rho, phi)
                    if value + extra < best[0]:
                        best = (value + extra, lbar, rho, phi)
        finally:
            sys.setrecursionlimit(limit)
        total, lbar, rho, phi = best
        if total == INF:
            raise InfeasibleInstance("no finite cell at the root")
        return total, *self._reconstruct(lbar, rho, phi)

    def _reconstruct(self, lbar, rho, phi):
        r = self.instance.root
        root = self.nice.root
        bag = self.bags[root]
        labels = dict(lbar)
        anchors: dict[int, int] = {}
        charges: list[Charge] = []
        for a, v in enumerate(bag):
            if v == r:
                continue
            if lbar[v] == INF:
                anchors[v] = v
                charges.append(Charge(v, INF, v, 0, "root"))
            else:
                w = self._anchor(v, lbar[v], rho[a], phi[a])
                anchors[v] = w
                charges.append(Charge(v, lbar[v], w, self.metric.d(v, w), "root"))
        stack = [(root, rho, phi)]
        while stack:
            node, rho_, phi_ = stack.pop()
            pick = self.choice[(node, rho_, phi_)]
            nd = self.nice.nodes[node]
            if nd.kind == FORGET:
                label, (child, c_rho, c_phi) = pick
                v = nd.vertex
                labels[v] = label
                if label == INF:
                    anchors[v] = v
                    charges.append(Charge(v, INF, v, 0, "forget"))
                else:
                    pos = self.bags[child].index(v)
                    w = self._anchor(v, label, c_rho[pos], c_phi[pos])
                    anchors[v] = w
                    charges.append(Charge(v, label, w, self.metric.d(v, w), "forget"))
                stack.append((child, c_rho, c_phi))
            else:
                stack.extend(pick)
        return LAP(labels, anchors), charges

    @property
    def cells(self) -> int:
        return len(self.memo)


def charge_audit(instance: Instance, cost, charges) -> None:
    """Every non-root vertex is charged exactly once and the charges add up."""
    seen = [c.vertex for c in charges]
    expected = sorted(v for v in range(instance.n) if v != instance.root)
    if sorted(seen) != expected:
        raise AssertionError(f"charged vertices {sorted(seen)} != {expected}")
    total = sum(c.cost for c in charges)
    if total != cost:
        raise AssertionError(f"charges sum to {total}, cost is {cost}")


def solve_treewidth(instance: Instance, nice: NiceTreeDecomposition | None = None):
    """Optimal cost and tree; returns ``(cost, tree, dp)``. Decomposes heuristically if needed."""
    if nice is None:
        nice = make_nice(heuristic_decompose(instance.graph), instance.graph, instance.root)
    dp = TreeWidthDP(instance, nice)
    cost, lap, charges = dp.solve()
    charge_audit(instance, cost, charges)
    assert lap_cost(instance.metric, lap) == cost
    tree = lap_to_tree(instance, lap)
    dp.charges = charges
    return cost, tree, dp
