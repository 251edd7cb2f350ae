"""One entry point over all exact solvers."""
from __future__ import annotations

from dataclasses import dataclass

from .decomposition import TreeDecomposition, heuristic_decompose, make_nice, validate_decomposition
from .lap import SteinerTree, lap_to_tree
from .metric import Instance
from .oracle import oracle_khop
from .path_dp import solve_path
from .tree_dp import solve_tree
from .twdp import BudgetExceeded, solve_treewidth, state_space

ALGOS = ("path", "tree", "treewidth", "oracle")
DEFAULT_BUDGET = 10**13


@dataclass
class SolveResult:
    algo: str
    cost: object
    tree: SteinerTree
    cells: int


def solve(
    instance: Instance,
    algo: str,
    td: TreeDecomposition | None = None,
    budget: int | None = DEFAULT_BUDGET,
    force: bool = False,
) -> SolveResult:
    if algo == "path":
        cost, tree, dp = solve_path(instance)
        return SolveResult(algo, cost, tree, dp.cells)
    if algo == "tree":
        cost, tree, dp = solve_tree(instance)
        return SolveResult(algo, cost, tree, dp.cells)
    if algo == "oracle":
        res = oracle_khop(instance)
        return SolveResult(algo, res.cost, lap_to_tree(instance, res.witness), res.labelings)
    if algo == "treewidth":
        graph = instance.graph
        if td is None:
            td = heuristic_decompose(graph)
        width = validate_decomposition(graph, td)
        size = state_space(instance.n, instance.k, width + 1)
        if budget is not None and not force and size > budget:
            raise BudgetExceeded(
                f"state space bound ~1e{len(str(size)) - 1} exceeds the budget {budget} (use --force)"
            )
        nice = make_nice(td, graph, instance.root)
        cost, tree, dp = solve_treewidth(instance, nice)
        return SolveResult(algo, cost, tree, dp.cells)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")


def tree_solver_for(algo: str, td: TreeDecomposition | None = None, **kwargs):
    """``instance -> (cost, tree)`` callable used by the net pipeline."""
    def run(instance: Instance):
        res = solve(instance, algo, td=td, **kwargs)
        return res.cost, res.tree
    return run
