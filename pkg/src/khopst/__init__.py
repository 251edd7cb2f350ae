"""Exact minimum-cost k-hop Steiner trees on path, tree and bounded-treewidth metrics."""
from .decomposition import (
    InvalidDecomposition,
    NiceTreeDecomposition,
    TreeDecomposition,
    heuristic_decompose,
    make_nice,
    validate_decomposition,
)
from .lap import LAP, SteinerTree, anchoring_from_labeling, lap_cost, lap_to_tree, validate_lap
from .metric import (
    BOTTOM,
    INF,
    SCALE,
    Instance,
    KhopError,
    Metric,
    WeightedGraph,
    build_metric,
    closest,
    make_instance,
    minimal_inducing_subgraph,
)
from .netlift import build_delta_net, lift_solution, net_pipeline
from .oracle import oracle_khop, oracle_mst, oracle_star, oracle_ufl
from .path_dp import solve_path
from .solvers import solve
from .tree_dp import solve_tree
from .twdp import solve_treewidth

__version__ = "0.1.0"
