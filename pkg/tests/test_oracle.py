import pytest

from helpers import random_connected, rngs, unit_path
from khopst.lap import lap_cost, lap_to_tree, validate_lap
from khopst.metric import make_instance
from khopst.oracle import (
    TooLarge,
    oracle_khop,
    oracle_mst,
    oracle_parent_enumeration,
    oracle_star,
    oracle_ufl,
)


def test_single_vertex():
    assert oracle_khop(make_instance(1, [], {0}, 0, 3)).cost == 0


@pytest.mark.parametrize("k,cost", [(1, 6), (2, 4), (3, 3), (5, 3)])
def test_unit_path_four(k, cost):
    inst = unit_path(4, k)
    assert oracle_khop(inst).cost == cost
    assert oracle_parent_enumeration(inst) == cost


def test_guard():
    with pytest.raises(TooLarge):
        oracle_khop(unit_path(11, 2))
    with pytest.raises(TooLarge):
        oracle_parent_enumeration(unit_path(7, 2))


def test_ufl_examples():
    assert oracle_ufl(unit_path(4, 2, terminals={0})) == 0
    star = make_instance(3, [(0, 1, 1), (0, 2, 1)], {0, 1, 2}, 0, 2)
    assert oracle_ufl(star) == 2
    with pytest.raises(ValueError):
        oracle_ufl(star.with_k(3))


def test_star_and_mst_examples():
    star = make_instance(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)], range(4), 0, 1)
    assert oracle_star(star) == 3
    tree = make_instance(4, [(0, 1, 4), (1, 2, 1), (1, 3, 7)], range(4), 0, 3)
    assert oracle_mst(tree) == 12
    cycle = make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)], range(4), 0, 3)
    assert oracle_mst(cycle) == 3
    with pytest.raises(ValueError):
        oracle_mst(unit_path(3, 2, terminals={0}))


def test_closed_forms_and_parent_enumeration():
    rng = rngs(11)
    for _ in range(60):
        n = rng.randint(1, 6)
        inst = random_connected(rng, n, rng.randint(1, 4))
        res = oracle_khop(inst)
        assert res.cost == oracle_parent_enumeration(inst)
        assert oracle_khop(inst.with_k(1)).cost == oracle_star(inst)
        assert oracle_khop(inst.with_k(2)).cost == oracle_ufl(inst.with_k(2))
        full = inst.with_terminals(range(n))
        assert oracle_khop(full.with_k(max(1, n - 1))).cost == oracle_mst(full)


def test_witness_valid_and_monotone():
    rng = rngs(12)
    for _ in range(40):
        n = rng.randint(1, 8)
        inst = random_connected(rng, n, 1)
        costs = []
        for k in range(1, n + 2):
            res = oracle_khop(inst.with_k(k))
            assert validate_lap(inst.with_k(k), res.witness)
            assert lap_cost(inst.metric, res.witness) == res.cost
            assert lap_to_tree(inst.with_k(k), res.witness).cost(inst.metric) == res.cost
            costs.append(res.cost)
        assert all(a >= b for a, b in zip(costs, costs[1:]))
        assert len(set(costs[max(0, n - 2):])) == 1
