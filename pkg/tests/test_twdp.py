import pytest

from helpers import random_connected, random_path, random_tree, rngs, unit_path
from khopst.decomposition import (
    FORGET,
    LEAF,
    NiceTreeDecomposition,
    TreeDecomposition,
    heuristic_decompose,
    make_nice,
)
from khopst.lap import lap_cost, lap_to_tree, validate_lap
from khopst.metric import BOTTOM, INF, make_instance
from khopst.oracle import oracle_khop
from khopst.path_dp import solve_path
from khopst.tree_dp import solve_tree
from khopst.twdp import TreeWidthDP, charge_audit, solve_treewidth, state_space


def nice_for(inst, td=None):
    td = heuristic_decompose(inst.graph) if td is None else td
    return make_nice(td, inst.graph, inst.root)


def test_leaf_cells_are_zero():
    inst = unit_path(3, 3)
    dp = TreeWidthDP(inst, nice_for(inst))
    leaves = [node.id for node in dp.nice.nodes if node.kind == LEAF]
    assert leaves and all(dp.bag_cell(b, (), ()) == 0 for b in leaves)


def test_unpromised_closer_anchor_is_infinite():
    inst = unit_path(3, 2)
    td = TreeDecomposition.from_lists([{0, 1}, {1, 2}], [(0, 1)])
    dp = TreeWidthDP(inst, nice_for(inst, td))
    node = next(n for n in dp.nice.nodes if n.bag == {0, 1} and 2 in n.below)
    # vertex 0 is promised nothing of label 1 outside, vertex 1 is promised vertex 0
    assert dp.bag_cell(node.id, ((BOTTOM,), (0,)), ((2,), (2,))) == INF
    assert dp.bag_cell(node.id, ((0,), (0,)), ((2,), (2,))) < INF


def test_forget_without_feasible_label_is_infinite():
    inst = unit_path(3, 3)
    td = TreeDecomposition.from_lists([{0, 1}, {1, 2}], [(0, 1)])
    dp = TreeWidthDP(inst, nice_for(inst, td))
    node = next(n for n in dp.nice.nodes if n.kind == FORGET and n.vertex == 2)
    (u,) = sorted(node.bag)
    # terminal 2 claimed for two labels at once
    assert dp.bag_cell(node.id, ((BOTTOM, BOTTOM),), ((2, 2),)) == INF
    # a legitimate claim is fine
    assert dp.bag_cell(node.id, ((0, BOTTOM),), ((BOTTOM, 2),)) < INF


def test_examples():
    single = make_instance(1, [], {0}, 0, 2)
    assert solve_treewidth(single, nice_for(single))[0] == 0
    path3 = unit_path(3, 2)
    td = TreeDecomposition.from_lists([{0, 1}, {1, 2}], [(0, 1)])
    assert solve_treewidth(path3, nice_for(path3, td))[0] == 2
    cycle = make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)], range(4), 0, 2)
    td = TreeDecomposition.from_lists([{0, 1, 2}, {0, 2, 3}], [(0, 1)])
    cost = solve_treewidth(cycle, nice_for(cycle, td))[0]
    assert cost == oracle_khop(cycle).cost == 3


def _check(inst, cost, tree, dp):
    assert cost == oracle_khop(inst).cost
    assert tree.cost(inst.metric) == cost and tree.height() <= inst.k
    lap = tree.to_lap(inst.n)
    assert validate_lap(inst, lap)


def test_oracle_equivalence():
    rng = rngs(41)
    for _ in range(80):
        inst = random_connected(rng, rng.randint(1, 7), rng.choice([1, 2, 2, 3]))
        _check(inst, *solve_treewidth(inst))


def test_agrees_with_tree_and_path_solvers():
    rng = rngs(42)
    for _ in range(30):
        inst = random_tree(rng, rng.randint(1, 8), rng.randint(1, 3))
        assert solve_treewidth(inst)[0] == solve_tree(inst)[0]
        inst = random_path(rng, rng.randint(1, 8), rng.randint(1, 3))
        c = solve_treewidth(inst)[0]
        assert c == solve_tree(inst)[0] == solve_path(inst)[0]


def test_each_vertex_charged_once():
    rng = rngs(43)
    for _ in range(40):
        inst = random_connected(rng, rng.randint(1, 6), rng.randint(1, 3))
        cost, tree, dp = solve_treewidth(inst)
        charge_audit(inst, cost, dp.charges)
        for c in dp.charges:
            assert c.cost == (0 if c.label == INF else inst.metric.d(c.vertex, c.anchor))
        lap = tree.to_lap(inst.n)
        assert lap_cost(inst.metric, lap) == sum(c.cost for c in dp.charges)
    with pytest.raises(AssertionError):
        charge_audit(unit_path(3, 2), 2, [])


def _strip_forget_chain(nice):
    root = nice.root
    while nice.nodes[root].kind == FORGET and len(nice.nodes[nice.nodes[root].children[0]].bag) <= 3:
        root = nice.nodes[root].children[0]
    return NiceTreeDecomposition(nice.nodes, root)


def test_root_extraction_with_larger_root_bag():
    rng = rngs(44)
    seen_large = 0
    for _ in range(40):
        inst = random_connected(rng, rng.randint(2, 6), rng.choice([1, 2]))
        nice = _strip_forget_chain(nice_for(inst))
        if inst.root not in nice.nodes[nice.root].bag:
            continue
        seen_large += len(nice.nodes[nice.root].bag) > 1
        dp = TreeWidthDP(inst, nice)
        cost, lap, charges = dp.solve()
        assert cost == oracle_khop(inst).cost
        assert validate_lap(inst, lap)
        charge_audit(inst, cost, charges)
        assert lap_to_tree(inst, lap).cost(inst.metric) == cost
    assert seen_large > 5


def test_state_space_bound():
    assert state_space(10, 1, 5) == 1
    assert state_space(3, 2, 2) == 5 ** 4
