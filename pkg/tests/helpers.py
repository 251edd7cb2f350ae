"""Random instance builders shared by the test modules."""
import random

from khopst.metric import make_instance


def rand_terminals(rng, n, r, p=0.6):
    return {r} | {v for v in range(n) if rng.random() < p}


def random_tree(rng, n, k, wmax=10, p=0.6, root=None):
    edges = [(rng.randrange(i), i, rng.randint(1, wmax)) for i in range(1, n)]
    r = rng.randrange(n) if root is None else root
    return make_instance(n, edges, rand_terminals(rng, n, r, p), r, k)


def random_path(rng, n, k, wmax=10, p=0.6, shuffle=True):
    ids = list(range(n))
    if shuffle:
        rng.shuffle(ids)
    edges = [(ids[i], ids[i + 1], rng.randint(1, wmax)) for i in range(n - 1)]
    r = rng.randrange(n)
    return make_instance(n, edges, rand_terminals(rng, n, r, p), r, k)


def random_connected(rng, n, k, wmax=10, p=0.6, extra=None):
    edges = {}
    for i in range(1, n):
        edges[(rng.randrange(i), i)] = rng.randint(1, wmax)
    for _ in range(rng.randint(0, n) if extra is None else extra):
        if n > 1:
            u, v = sorted(rng.sample(range(n), 2))
            edges[(u, v)] = rng.randint(1, wmax)
    r = rng.randrange(n)
    return make_instance(n, [(u, v, w) for (u, v), w in edges.items()], rand_terminals(rng, n, r, p), r, k)


def unit_path(n, k, root=0, terminals=None):
    terms = range(n) if terminals is None else terminals
    return make_instance(n, [(i, i + 1, 1) for i in range(n - 1)], terms, root, k)


def rngs(seed):
    return random.Random(seed)
