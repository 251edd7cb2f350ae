"""Seeded instance generators. The same arguments always give the same bytes."""
from __future__ import annotations

import itertools
import random

from .decomposition import TreeDecomposition
from .formats import write_instance, write_td
from .metric import SCALE, Instance, build_metric, WeightedGraph

KINDS = ("path", "tree", "random-connected", "partial-ktree")


def _weight(rng, wmin, wmax) -> int:
    return rng.randint(wmin, wmax) * SCALE


def _terminals(rng, n, root, density) -> set:
    return {root} | {v for v in range(n) if rng.random() < density}


def _connected(n, edges) -> bool:
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {0}, [0]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


def _partial_ktree(rng, n, kgen):
    base = min(n, kgen + 1)
    edges = set(itertools.combinations(range(base), 2))
    bags = [frozenset(range(base))]
    td_edges = []
    cliques = [(c, 0) for c in itertools.combinations(range(base), min(kgen, base))]
    for v in range(base, n):
        clique, home = rng.choice(cliques)
        edges |= {(u, v) for u in clique}
        bags.append(frozenset(clique) | {v})
        td_edges.append((home, len(bags) - 1))
        new_bag = sorted(bags[-1])
        cliques += [(c, len(bags) - 1) for c in itertools.combinations(new_bag, kgen) if v in c]
    edges = sorted(edges)
    # delete random edges while the graph stays connected
    for e in list(edges):
        if rng.random() < 0.3:
            trial = [x for x in edges if x != e]
            if _connected(n, trial):
                edges = trial
    return edges, TreeDecomposition(tuple(bags), tuple(td_edges))


def generate(
    kind: str,
    n: int,
    seed: int = 0,
    k: int = 2,
    wmin: int = 1,
    wmax: int = 10,
    density: float = 0.5,
    kgen: int = 2,
    root: int | None = None,
):
    """Return ``(instance, declared class, decomposition or None)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= wmin <= wmax:
        raise ValueError("need 1 <= wmin <= wmax")
    rng = random.Random(seed)
    td = None
    if kind == "path":
        pairs = [(i, i + 1) for i in range(n - 1)]
        declared = "path"
        default_root = 0
    elif kind == "tree":
        pairs = [(rng.randrange(i), i) for i in range(1, n)]
        declared = "tree"
        default_root = rng.randrange(n)
    elif kind == "random-connected":
        pairs = {(rng.randrange(i), i) for i in range(1, n)}
        for _ in range(n // 2 if n > 2 else 0):
            u, v = sorted(rng.sample(range(n), 2))
            pairs.add((u, v))
        pairs = sorted(pairs)
        declared = "general"
        default_root = rng.randrange(n)
    elif kind == "partial-ktree":
        if kgen < 1:
            raise ValueError("kgen must be at least 1")
        pairs, td = _partial_ktree(rng, n, kgen)
        declared = "general"
        default_root = rng.randrange(n)
    else:
        raise ValueError(f"unknown generator kind {kind!r}; choose from {', '.join(KINDS)}")
    edges = tuple((u, v, _weight(rng, wmin, wmax)) for u, v in pairs)
    r = default_root if root is None else root
    if not 0 <= r < n:
        raise ValueError("root out of range")
    terminals = _terminals(rng, n, r, density)
    instance = Instance(build_metric(WeightedGraph(n, edges)), frozenset(terminals), r, k)
    return instance, declared, td


def generate_text(kind: str, n: int, seed: int = 0, **kwargs) -> tuple[str, str | None]:
    instance, declared, td = generate(kind, n, seed, **kwargs)
    text = write_instance(instance, declared, comment=f"{kind} n={n} seed={seed}")
    return text, (write_td(td, n) if td is not None else None)
