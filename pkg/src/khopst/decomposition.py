"""Tree decompositions: validation, a min-fill heuristic and nice form.

A nice decomposition is rooted and every node is a leaf (empty bag), an
introduce or forget node (bag differs from its only child's by one vertex)
or a join (two children with the same bag). ``make_nice`` always ends with a
forget chain so the root bag is exactly ``{r}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .metric import KhopError, WeightedGraph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class InvalidDecomposition(KhopError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple  # tuple of frozensets
    edges: tuple  # pairs of bag indices

    @classmethod
    def from_lists(cls, bags, edges=()) -> "TreeDecomposition":
        return cls(tuple(frozenset(b) for b in bags), tuple((int(a), int(b)) for a, b in edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass
class NiceNode:
    id: int
    kind: str
    bag: frozenset
    children: tuple = ()
    vertex: int | None = None
    below: frozenset = field(default=frozenset())  # C_b: strictly-below bags minus the own bag


@dataclass
class NiceTreeDecomposition:
    nodes: list
    root: int

    @property
    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1

    def postorder(self) -> list[int]:
        order, stack = [], [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            stack.append((node, True))
            for child in reversed(self.nodes[node].children):
                stack.append((child, False))
        return order

    def as_decomposition(self) -> TreeDecomposition:
        edges = [(node.id, c) for node in self.nodes for c in node.children]
        return TreeDecomposition(tuple(node.bag for node in self.nodes), tuple(edges))


def validate_decomposition(graph: WeightedGraph, td: TreeDecomposition) -> int:
    """Check the three decomposition properties and return the width."""
    nb = len(td.bags)
    if nb == 0:
        raise InvalidDecomposition("(iii) decomposition has no bags")
    for bag in td.bags:
        bad = [v for v in bag if not (0 <= v < graph.n)]
        if bad:
            raise InvalidDecomposition(f"(i) bag references unknown vertex {bad[0]}")
    tree = nx.Graph()
    tree.add_nodes_from(range(nb))
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            raise InvalidDecomposition(f"(ii) bad decomposition edge ({a}, {b})")
        tree.add_edge(a, b)
    if tree.number_of_edges() != len(td.edges) or not nx.is_tree(tree):
        raise InvalidDecomposition("(ii) decomposition edges do not form a tree")
    covered = set().union(*td.bags)
    missing = sorted(set(range(graph.n)) - covered)
    if missing:
        raise InvalidDecomposition(f"(i) vertex {missing[0]} is in no bag")
    for u, v, _ in graph.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            raise InvalidDecomposition(f"(i) edge ({u}, {v}) is in no bag")
    for v in range(graph.n):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        if not nx.is_connected(tree.subgraph(holding)):
            raise InvalidDecomposition(f"(ii) bags containing vertex {v} are not connected")
    return td.width


def heuristic_decompose(graph: WeightedGraph) -> TreeDecomposition:
    """Min-fill elimination decomposition; valid but not necessarily optimal."""
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from((u, v) for u, v, _ in graph.edges)
    _, decomposition = treewidth_min_fill_in(g)
    bags = sorted(decomposition.nodes, key=lambda b: sorted(b))
    index = {b: i for i, b in enumerate(bags)}
    edges = sorted(tuple(sorted((index[a], index[b]))) for a, b in decomposition.edges)
    return TreeDecomposition(tuple(bags), tuple(edges))


def make_nice(td: TreeDecomposition, graph: WeightedGraph, r: int) -> NiceTreeDecomposition:
    """Convert a valid decomposition into nice form with root bag ``{r}``."""
    validate_decomposition(graph, td)
    start = next(i for i, bag in enumerate(td.bags) if r in bag)
    adj: dict[int, list[int]] = {i: [] for i in range(len(td.bags))}
    for a, b in td.edges:
        adj[a].append(b)
        adj[b].append(a)
    children: dict[int, list[int]] = {}
    order, seen = [start], {start}
    for b in order:
        children[b] = sorted(c for c in adj[b] if c not in seen)
        seen.update(children[b])
        order.extend(children[b])

    nodes: list[NiceNode] = []

    def add(kind, bag, kids=(), vertex=None) -> int:
        nodes.append(NiceNode(len(nodes), kind, frozenset(bag), tuple(kids), vertex))
        return len(nodes) - 1

    def morph(node: int, target: frozenset) -> int:
        # forget what target lacks, then introduce what it adds
        bag = nodes[node].bag
        for v in sorted(bag - target):
            bag = bag - {v}
            node = add(FORGET, bag, (node,), v)
        for v in sorted(target - bag):
            bag = bag | {v}
            node = add(INTRODUCE, bag, (node,), v)
        return node

    built: dict[int, int] = {}
    for b in reversed(order):
        target = td.bags[b]
        if not children[b]:
            built[b] = morph(add(LEAF, ()), target)
            continue
        tops = [morph(built[c], target) for c in children[b]]
        node = tops[0]
        for other in tops[1:]:
            node = add(JOIN, target, (node, other))
        built[b] = node
    root = morph(built[start], frozenset({r}))

    nice = NiceTreeDecomposition(nodes, root)
    for i in nice.postorder():
        node = nodes[i]
        below: set = set()
        for c in node.children:
            below |= nodes[c].below | nodes[c].bag
        node.below = frozenset(below - node.bag)
        outside = set(range(graph.n)) - node.below - node.bag
        for u, v, _ in graph.edges:
            if (u in node.below and v in outside) or (v in node.below and u in outside):
                raise InvalidDecomposition(f"edge ({u}, {v}) leaves the below-set of node {i}")
    check_nice(nice)
    return nice


def check_nice(nice: NiceTreeDecomposition) -> None:
    for node in nice.nodes:
        kids = [nice.nodes[c] for c in node.children]
        if node.kind == LEAF:
            ok = not kids and not node.bag
        elif node.kind == JOIN:
            ok = len(kids) == 2 and all(k.bag == node.bag for k in kids)
            ok = ok and not (kids[0].below & kids[1].below)
        elif node.kind == INTRODUCE:
            ok = len(kids) == 1 and node.vertex not in kids[0].bag
            ok = ok and node.bag == kids[0].bag | {node.vertex}
        elif node.kind == FORGET:
            ok = len(kids) == 1 and node.vertex in kids[0].bag
            ok = ok and node.bag == kids[0].bag - {node.vertex}
        else:
            ok = False
        if not ok:
            raise InvalidDecomposition(f"node {node.id} is not a well-formed {node.kind} node")
