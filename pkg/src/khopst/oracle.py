"""Brute-force reference solvers.

``oracle_khop`` enumerates every labeling and anchors each vertex to the
closest vertex one level up; because the cost separates per vertex once the
labels are fixed, that anchoring is optimal for the labeling. Nothing here
shares code with the dynamic programs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .lap import LAP, anchoring_from_labeling
from .metric import INF, Instance, KhopError

MAX_ORACLE_N = 10
MAX_UFL_N = 16
_INNER_ROWS = 1 << 16


class TooLarge(KhopError):
    pass


@dataclass(frozen=True)
class OracleResult:
    cost: object
    witness: LAP
    labelings: int = 0


def _effective_k(instance: Instance) -> int:
    # labels must form contiguous nonempty levels, so depth never exceeds n - 1
    return max(1, min(instance.k, instance.n - 1))


def oracle_khop(instance: Instance) -> OracleResult:
    n, r = instance.n, instance.root
    if n > MAX_ORACLE_N:
        raise TooLarge(f"oracle_khop is limited to n <= {MAX_ORACLE_N}, got {n}")
    if n == 1:
        return OracleResult(0, anchoring_from_labeling(instance, {r: 0}), 1)
    k = _effective_k(instance)
    unlabelled = k + 1
    free = [v for v in range(n) if v != r]
    choices = [
        list(range(1, k + 1)) + ([] if v in instance.terminals else [unlabelled])
        for v in free
    ]

    # the trailing vertices form a numpy grid, the leading ones a Python loop;
    # both run in lexicographic order so the first minimum is the smallest labeling
    split = len(free)
    rows = 1
    while split > 0 and rows * len(choices[split - 1]) <= _INNER_ROWS:
        split -= 1
        rows *= len(choices[split])
    inner_grid = _grid(choices[split:])

    dist = np.array(instance.metric.dist, dtype=np.int64)
    big = np.int64(1) << 56
    best_cost, best_row, count = None, None, 0
    for outer in itertools.product(*choices[:split]):
        lab = np.empty((inner_grid.shape[0], n), dtype=np.int64)
        lab[:, r] = 0
        for v, value in zip(free[:split], outer):
            lab[:, v] = value
        for j, v in enumerate(free[split:]):
            lab[:, v] = inner_grid[:, j]
        total = np.zeros(lab.shape[0], dtype=np.int64)
        for w in free:
            target = lab[:, w] - 1
            best = np.full(lab.shape[0], big, dtype=np.int64)
            for x in range(n):
                if x != w:
                    np.minimum(best, np.where(lab[:, x] == target, dist[w, x], big), out=best)
            total += np.where(lab[:, w] == unlabelled, 0, best)
        count += lab.shape[0]
        idx = int(np.argmin(total))
        if total[idx] < big and (best_cost is None or total[idx] < best_cost):
            best_cost, best_row = int(total[idx]), lab[idx].copy()
    if best_row is None:
        raise KhopError("no feasible labeling")  # unreachable: the star is always feasible
    labels = {v: (INF if int(best_row[v]) == unlabelled else int(best_row[v])) for v in range(n)}
    witness = anchoring_from_labeling(instance, labels)
    return OracleResult(best_cost, witness, count)


def _grid(choices: list[list[int]]) -> np.ndarray:
    if not choices:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*[np.array(c, dtype=np.int64) for c in choices], indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def oracle_parent_enumeration(instance: Instance):
    """Enumerate every parent function directly; used to check ``oracle_khop`` for n <= 6."""
    n, r, k = instance.n, instance.root, instance.k
    if n > 6:
        raise TooLarge("parent enumeration is limited to n <= 6")
    dist = instance.metric.dist
    free = [v for v in range(n) if v != r]
    options = [
        [p for p in range(n) if p != v] + ([] if v in instance.terminals else [None])
        for v in free
    ]
    best = INF
    for parents in itertools.product(*options):
        par = dict(zip(free, parents))
        ok = True
        for v in free:
            if par[v] is None:
                continue
            seen, u, steps = set(), v, 0
            while u != r:
                if u in seen or par[u] is None:
                    ok = False
                    break
                seen.add(u)
                u = par[u]
                steps += 1
            if not ok or steps > k:
                ok = False
                break
        if ok:
            best = min(best, sum(dist[v][p] for v, p in par.items() if p is not None))
    return best


def oracle_ufl(instance: Instance):
    """Two-hop optimum as uncapacitated facility location with facilities opened at d(r, s)."""
    if instance.k != 2:
        raise ValueError("oracle_ufl needs k = 2")
    n, r = instance.n, instance.root
    if n > MAX_UFL_N:
        raise TooLarge(f"oracle_ufl is limited to n <= {MAX_UFL_N}")
    dist = instance.metric.dist
    others = [v for v in range(n) if v != r]
    clients = [x for x in sorted(instance.terminals) if x != r]
    best = INF
    for size in range(len(others) + 1):
        for opened in itertools.combinations(others, size):
            hubs = (r,) + opened
            cost = sum(dist[r][s] for s in opened)
            for x in clients:
                if x not in opened:
                    cost += min(dist[x][h] for h in hubs)
            best = min(best, cost)
    return best


def oracle_star(instance: Instance):
    r = instance.root
    return sum(instance.metric.dist[r][x] for x in instance.terminals if x != r)


def oracle_mst(instance: Instance):
    """Minimum spanning tree weight of the metric closure (requires X = V)."""
    if len(instance.terminals) != instance.n:
        raise ValueError("oracle_mst needs every vertex to be a terminal")
    closure = nx.Graph()
    closure.add_nodes_from(range(instance.n))
    dist = instance.metric.dist
    for u in range(instance.n):
        for v in range(u + 1, instance.n):
            closure.add_edge(u, v, weight=dist[u][v])
    tree = nx.minimum_spanning_tree(closure, weight="weight")
    return sum(w for _, _, w in tree.edges(data="weight"))
