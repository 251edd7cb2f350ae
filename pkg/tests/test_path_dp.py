import itertools
from functools import lru_cache

import pytest

from helpers import random_path, rngs, unit_path
from khopst.lap import validate_lap
from khopst.metric import make_instance
from khopst.oracle import oracle_khop
from khopst.path_dp import NotAPathOrder, PathDP, line_order, reduce_to_terminals, solve_path


def reference_cells(coords, k):
    """Direct memoised recursion over closed intervals, 0-based."""
    n = len(coords)

    def d(a, b):
        return abs(coords[a] - coords[b])

    @lru_cache(maxsize=None)
    def A(p, s, a, b):
        if a > b:
            return 0
        if a == b:
            return d(s, a)
        if p == 1:
            return sum(d(s, x) for x in range(a, b + 1))
        best = None
        for child in range(a, b + 1):
            for c in range(a, child + 1):
                value = d(s, child) + A(p, s, a, c - 1) + A(p - 1, child, c, child - 1) + A(p - 1, child, child + 1, b)
                best = value if best is None else min(best, value)
        return best

    return A


def brute_cell(coords, p, s, members):
    """Cheapest tree of depth <= p rooted at s spanning exactly ``members``."""
    members = list(members)
    best = None
    for parents in itertools.product([s] + members, repeat=len(members)):
        par = dict(zip(members, parents))
        ok = True
        for v in members:
            u, steps = v, 0
            while u != s and steps <= p:
                u = par[u]
                steps += 1
            if u != s or steps > p:
                ok = False
                break
        if ok:
            cost = sum(abs(coords[v] - coords[q]) for v, q in par.items())
            best = cost if best is None else min(best, cost)
    return best


def test_empty_interval():
    dp = PathDP([0, 1, 2, 3, 4, 5], 3)
    assert dp.cell(2, 0, 4, 2) == 0


def test_one_hop_closed_form():
    # A[1, s=4, a=1, b=3] on a 4-vertex unit path, 1-based
    assert PathDP([0, 1, 2, 3], 2).cell(1, 3, 0, 2) == 6


def test_two_hop_cell_matches_brute_force():
    # root v1 spanning {v2, v3, v4} within two hops: 4, and 3 once three hops are allowed
    coords = [0, 1, 2, 3]
    dp = PathDP(coords, 3)
    assert dp.cell(2, 0, 1, 3) == brute_cell(coords, 2, 0, [1, 2, 3]) == 4
    assert dp.cell(3, 0, 1, 3) == brute_cell(coords, 3, 0, [1, 2, 3]) == 3


@pytest.mark.parametrize("k,cost", [(1, 6), (2, 4), (3, 3)])
def test_unit_path_optimum(k, cost):
    c, tree, _ = solve_path(unit_path(4, k))
    assert c == cost == tree.cost(unit_path(4, k).metric)


def test_reduction_examples():
    inst = unit_path(3, 2)
    red = reduce_to_terminals(inst)
    assert red.vertices == (0, 1, 2) and red.coords == (0, 1, 2)
    red = reduce_to_terminals(unit_path(3, 2, terminals={0, 2}))
    assert red.vertices == (0, 2) and red.coords == (0, 2)
    five = unit_path(5, 2, terminals={0, 2, 4})
    red = reduce_to_terminals(five)
    assert red.coords == (0, 2, 4)
    assert solve_path(five)[0] == oracle_khop(five).cost


def test_not_a_path():
    star = make_instance(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)], range(4), 0, 2)
    with pytest.raises(NotAPathOrder):
        solve_path(star)
    with pytest.raises(NotAPathOrder):
        reduce_to_terminals(unit_path(3, 2), order=[0, 2, 1])


def test_line_order_handles_shuffled_ids():
    inst = make_instance(4, [(2, 0, 1), (0, 3, 1), (3, 1, 1)], range(4), 0, 2)
    assert line_order(inst) in ([1, 3, 0, 2], [2, 0, 3, 1])


def test_tables_match_reference_recursion():
    rng = rngs(21)
    for _ in range(40):
        n = rng.randint(1, 7)
        coords = sorted(rng.sample(range(0, 40), n))
        k = rng.randint(1, 4)
        dp = PathDP(coords, k)
        ref = reference_cells(tuple(coords), dp.k)
        for p in range(1, dp.k + 1):
            for s in range(n):
                for a in range(n):
                    for b in range(a - 1, n):
                        if a <= s <= b:
                            continue
                        assert dp.cell(p, s, a, b) == ref(p, s, a, b)


def test_oracle_equivalence_and_monotone():
    rng = rngs(22)
    for _ in range(80):
        inst = random_path(rng, rng.randint(1, 9), 1)
        costs = []
        for k in range(1, 5):
            c, tree, _ = solve_path(inst.with_k(k))
            assert c == oracle_khop(inst.with_k(k)).cost
            assert tree.cost(inst.metric) == c and tree.height() <= k
            assert validate_lap(inst.with_k(k), tree.to_lap(inst.n))
            costs.append(c)
        assert costs == sorted(costs, reverse=True)


def test_no_edge_passes_over_a_shallower_vertex():
    rng = rngs(23)
    for _ in range(60):
        n = rng.randint(2, 12)
        inst = random_path(rng, n, rng.randint(1, 5), p=1.0)
        _, tree, _ = solve_path(inst)
        order = line_order(inst)
        pos = {v: i for i, v in enumerate(order)}
        for parent, child in tree.edges():
            lo, hi = sorted((pos[parent], pos[child]))
            for x in order[lo + 1:hi]:
                assert tree.depth[x] >= tree.depth[child]
