"""Delta-nets and the (k+1)-hop lift.

The pipeline solves the instance restricted to a delta-net ``U`` exactly, with
the net points of the terminals as demands, then hangs every terminal outside
``U`` below its net point. The extra cost is exactly the sum of those
attachment distances, each at most delta.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lap import NotAKHopTree, SteinerTree, tree_from_parents
from .metric import INF, Instance, KhopError, Metric, WeightedGraph, build_metric, closest, restrict


class InvalidNetTree(KhopError):
    pass


@dataclass(frozen=True)
class DeltaNet:
    net: tuple  # sorted net vertices
    delta: object
    assignment: dict  # vertex -> closest net vertex

    def covers(self, metric: Metric) -> bool:
        return all(metric.dist[v][a] <= self.delta for v, a in self.assignment.items())

    def packs(self, metric: Metric) -> bool:
        return all(
            metric.dist[u][v] > self.delta for i, u in enumerate(self.net) for v in self.net[i + 1:]
        )


@dataclass
class NetResult:
    tree: SteinerTree
    cost: object
    net_cost: object
    lift_cost: object
    net: DeltaNet
    bound: object  # n * delta

    @property
    def certificate_ok(self) -> bool:
        return self.cost == self.net_cost + self.lift_cost and self.lift_cost <= self.bound


def build_delta_net(metric: Metric, r: int, delta) -> DeltaNet:
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    chosen = [r]
    for v in range(metric.n):
        if v != r and min(metric.dist[v][u] for u in chosen) > delta:
            chosen.append(v)
    net = tuple(sorted(chosen))
    assignment = {v: closest(metric, v, net) for v in range(metric.n)}
    return DeltaNet(net, delta, assignment)


def net_instance(instance: Instance, net: DeltaNet) -> tuple[Instance, list[int]]:
    """The instance on ``U``, relabelled; demands are the net points of the terminals."""
    metric, keep = restrict(instance.metric, net.net)
    new_id = {v: i for i, v in enumerate(keep)}
    demands = {new_id[net.assignment[x]] for x in instance.terminals}
    return Instance(metric, frozenset(demands), new_id[instance.root], instance.k), keep


def lift_solution(net_tree: SteinerTree, instance: Instance, net: DeltaNet) -> SteinerTree:
    """Attach every terminal outside the net to its net point; depth grows by at most one."""
    U = set(net.net)
    if net_tree.root != instance.root:
        raise InvalidNetTree("net tree is not rooted at r")
    if not set(net_tree.depth) <= U:
        raise InvalidNetTree("net tree uses vertices outside the net")
    if net_tree.height() > instance.k:
        raise InvalidNetTree(f"net tree has depth {net_tree.height()} > {instance.k}")
    try:
        tree_from_parents(net_tree.root, net_tree.parent, instance.k)
    except NotAKHopTree as exc:
        raise InvalidNetTree(str(exc)) from None
    parent = dict(net_tree.parent)
    for x in sorted(instance.terminals - U):
        a = net.assignment[x]
        if a not in net_tree.depth:
            raise InvalidNetTree(f"net point {a} of terminal {x} is not in the net tree")
        parent[x] = a
    return tree_from_parents(instance.root, parent, instance.k + 1)


def prune_heavy_edges(instance: Instance) -> tuple[Instance, list[int]]:
    """Drop inducing edges heavier than the star cost and keep r's component.

    Every edge of an optimal tree costs at most the star cost, so the shortest
    paths it stands for avoid heavier edges and the optimum is unchanged.
    Removing edges only lengthens distances, so any tree found afterwards
    costs no more in the original metric. Returns the instance and the map
    from new to old vertex ids.
    """
    r = instance.root
    bound = sum(instance.metric.dist[r][x] for x in instance.terminals)
    graph = instance.graph
    kept = [e for e in graph.edges if e[2] <= bound]
    if len(kept) == len(graph.edges):
        return instance, list(range(instance.n))
    reach, stack = {r}, [r]
    adj = WeightedGraph(graph.n, tuple(kept)).adjacency()
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if v not in reach:
                reach.add(v)
                stack.append(v)
    keep = sorted(reach)
    new_id = {v: i for i, v in enumerate(keep)}
    edges = tuple((new_id[u], new_id[v], w) for u, v, w in kept if u in reach and v in reach)
    metric = build_metric(WeightedGraph(len(keep), edges))
    terminals = frozenset(new_id[x] for x in instance.terminals)
    return Instance(metric, terminals, new_id[r], instance.k), keep


def net_pipeline(instance: Instance, delta, solver) -> NetResult:
    """Solve on a delta-net with ``solver(instance) -> (cost, tree)`` and lift."""
    net = build_delta_net(instance.metric, instance.root, delta)
    sub, keep = net_instance(instance, net)
    pruned, inner = prune_heavy_edges(sub)
    _, sub_tree = solver(pruned)
    parent = {keep[inner[c]]: keep[inner[p]] for c, p in sub_tree.parent.items()}
    net_tree = tree_from_parents(instance.root, parent, instance.k)
    net_cost = net_tree.cost(instance.metric)
    tree = lift_solution(net_tree, instance, net)
    lift_cost = sum(instance.metric.dist[x][net.assignment[x]] for x in instance.terminals - set(net.net))
    cost = tree.cost(instance.metric)
    bound = instance.n * delta if delta != INF else INF
    result = NetResult(tree, cost, net_cost, lift_cost, net, bound)
    if not result.certificate_ok:
        raise InvalidNetTree("lift certificate failed")
    return result
