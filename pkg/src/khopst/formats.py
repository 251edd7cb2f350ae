"""Text formats: instances, tree decompositions and solution JSON.

Instance files are line based::

    c optional comment
    p khop <n> <m> <k>
    d path|tree|general        (optional class declaration)
    r <root>
    t <terminal>               (one per terminal; the root is added if missing)
    e <u> <v> <weight>         (weight is a decimal literal)
"""
from __future__ import annotations

import json
from decimal import Decimal, InvalidOperation

from .decomposition import TreeDecomposition
from .lap import SteinerTree
from .metric import (
    INF,
    SCALE,
    Instance,
    KhopError,
    WeightedGraph,
    build_metric,
    format_cost,
    minimal_inducing_subgraph,
    parse_weight,
)

CLASSES = ("path", "tree", "general")


class ParseError(KhopError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ClassMismatch(KhopError):
    pass


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} is not an integer: {token!r}", line) from None


def parse_instance_text(text: str) -> tuple[Instance, str]:
    """Parse an instance and check its class declaration; returns ``(instance, class)``."""
    header = None
    root = None
    declared = "general"
    terminals: list[int] = []
    edges: list[tuple[int, int, int]] = []
    seen_edges: set = set()
    for no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate header", no)
            if len(parts) != 5 or parts[1] != "khop":
                raise ParseError("header must be 'p khop <n> <m> <k>'", no)
            header = tuple(_int(x, no, "header field") for x in parts[2:])
            if header[0] < 1:
                raise ParseError("n must be at least 1", no)
            if header[2] < 1:
                raise ParseError("k must be at least 1", no)
            continue
        if header is None:
            raise ParseError("the header must come first", no)
        n = header[0]
        if tag == "d":
            if len(parts) != 2 or parts[1] not in CLASSES:
                raise ParseError("class line must be 'd path|tree|general'", no)
            declared = parts[1]
        elif tag == "r":
            if len(parts) != 2:
                raise ParseError("root line must be 'r <id>'", no)
            if root is not None:
                raise ParseError("duplicate root line", no)
            root = _int(parts[1], no, "root")
            if not 0 <= root < n:
                raise ParseError(f"root {root} out of range", no)
        elif tag == "t":
            if len(parts) != 2:
                raise ParseError("terminal line must be 't <id>'", no)
            t = _int(parts[1], no, "terminal")
            if not 0 <= t < n:
                raise ParseError(f"terminal {t} out of range", no)
            terminals.append(t)
        elif tag == "e":
            if len(parts) != 4:
                raise ParseError("edge line must be 'e <u> <v> <weight>'", no)
            u, v = _int(parts[1], no, "endpoint"), _int(parts[2], no, "endpoint")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({u}, {v}) references an unknown vertex", no)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", no)
            pair = (min(u, v), max(u, v))
            if pair in seen_edges:
                raise ParseError(f"duplicate edge {pair}", no)
            seen_edges.add(pair)
            try:
                w = parse_weight(parts[3])
            except (ValueError, KhopError) as exc:
                raise ParseError(str(exc), no) from None
            edges.append((u, v, w))
        else:
            raise ParseError(f"unknown line type {tag!r}", no)
    if header is None:
        raise ParseError("missing header")
    n, m, k = header
    if root is None:
        raise ParseError("missing root line")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    try:
        metric = build_metric(WeightedGraph(n, tuple(edges)))
    except KhopError as exc:
        raise ParseError(str(exc)) from None
    instance = Instance(metric, frozenset(terminals) | {root}, root, k)
    check_class(instance, declared)
    return instance, declared


def check_class(instance: Instance, declared: str) -> None:
    if declared == "general":
        return
    graph = minimal_inducing_subgraph(instance.graph, instance.metric)
    if declared == "path" and not graph.is_path():
        raise ClassMismatch("declared a path metric but the minimal inducing graph is not a path")
    if declared == "tree" and not graph.is_tree():
        raise ClassMismatch("declared a tree metric but the minimal inducing graph is not a tree")


def parse_instance(path: str) -> tuple[Instance, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance_text(fh.read())


def write_instance(instance: Instance, declared: str | None = None, comment: str | None = None) -> str:
    graph = instance.graph
    lines = []
    if comment:
        lines.append(f"c {comment}")
    lines.append(f"p khop {instance.n} {len(graph.edges)} {instance.k}")
    if declared:
        lines.append(f"d {declared}")
    lines.append(f"r {instance.root}")
    lines += [f"t {t}" for t in sorted(instance.terminals)]
    lines += [f"e {u} {v} {format_cost(w)}" for u, v, w in graph.edges]
    return "\n".join(lines) + "\n"


def parse_td_text(text: str) -> TreeDecomposition:
    """PACE-style: ``s td <bags> <max bag size> <n>``, ``b <id> <v...>`` (ids from 1), edges."""
    header = None
    bags: dict[int, frozenset] = {}
    edges = []
    for no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError("header must be 's td <bags> <max bag size> <n>'", no)
            header = tuple(_int(x, no, "header field") for x in parts[2:])
        elif header is None:
            raise ParseError("the header must come first", no)
        elif parts[0] == "b":
            if len(parts) < 2:
                raise ParseError("bag line must be 'b <id> <v...>'", no)
            bid = _int(parts[1], no, "bag id")
            if not 1 <= bid <= header[0] or bid in bags:
                raise ParseError(f"bad or repeated bag id {bid}", no)
            vs = [_int(x, no, "vertex") for x in parts[2:]]
            if len(vs) > header[1]:
                raise ParseError(f"bag {bid} exceeds the announced size {header[1]}", no)
            bags[bid] = frozenset(vs)
        elif len(parts) == 2:
            a, b = _int(parts[0], no, "bag id"), _int(parts[1], no, "bag id")
            edges.append((a - 1, b - 1))
        else:
            raise ParseError(f"unknown line {raw.strip()!r}", no)
    if header is None:
        raise ParseError("missing header")
    if sorted(bags) != list(range(1, header[0] + 1)):
        raise ParseError(f"expected bags 1..{header[0]}")
    return TreeDecomposition(tuple(bags[i] for i in range(1, header[0] + 1)), tuple(edges))


def parse_td(path: str) -> TreeDecomposition:
    with open(path, encoding="utf-8") as fh:
        return parse_td_text(fh.read())


def write_td(td: TreeDecomposition, n: int) -> str:
    size = max((len(b) for b in td.bags), default=0)
    lines = [f"s td {len(td.bags)} {size} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i)] + [str(v) for v in sorted(bag)]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.edges]
    return "\n".join(lines) + "\n"


# -- solutions ---------------------------------------------------------------

def solution_json(instance: Instance, tree: SteinerTree, cost=None) -> str:
    if cost is None:
        cost = tree.cost(instance.metric)
    edges = [[p, c] for p, c in tree.edges()]
    labels = {str(v): tree.depth.get(v, "inf") for v in range(instance.n)}
    return (
        '{"cost": ' + format_cost(cost)
        + ', "edges": ' + json.dumps(edges)
        + ', "labels": ' + json.dumps(labels) + "}"
    )


def parse_solution_text(text: str) -> dict:
    """Returns ``{"cost": scaled int, "edges": [(p, c)], "labels": {v: depth or INF}}``."""
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict) or "cost" not in data or "edges" not in data:
        raise ParseError("solution needs 'cost' and 'edges'")
    try:
        scaled = Decimal(data["cost"]) * SCALE
        if scaled != scaled.to_integral_value():
            raise ParseError("cost has more than 6 fractional digits")
        cost = int(scaled)
        edges = [(int(p), int(c)) for p, c in data["edges"]]
        labels = {
            int(v): (INF if lab == "inf" else int(lab)) for v, lab in data.get("labels", {}).items()
        }
    except (TypeError, ValueError, InvalidOperation):
        raise ParseError("malformed solution fields") from None
    return {"cost": cost, "edges": edges, "labels": labels}


def verify_solution(instance: Instance, solution: dict, hops: int | None = None) -> list[str]:
    """Problems found in a parsed solution; empty means valid."""
    hops = instance.k if hops is None else hops
    r, n = instance.root, instance.n
    problems = []
    parent: dict[int, int] = {}
    for p, c in solution["edges"]:
        if not (0 <= p < n and 0 <= c < n):
            problems.append(f"edge ({p}, {c}) references an unknown vertex")
            continue
        if c == r:
            problems.append(f"the root {r} has a parent")
        if c in parent:
            problems.append(f"vertex {c} has two parents")
        parent[c] = p
    if problems:
        return problems
    depth = {r: 0}
    for v in parent:
        chain, u = [], v
        while u not in depth:
            if u in chain or u not in parent:
                problems.append(f"vertex {v} does not reach the root (cycle or dangling edge)")
                break
            chain.append(u)
            u = parent[u]
        else:
            d = depth[u]
            for w in reversed(chain):
                d += 1
                depth[w] = d
    if problems:
        return problems
    deep = sorted(v for v, d in depth.items() if d > hops)
    if deep:
        problems.append(f"depth violation: vertex {deep[0]} at depth {depth[deep[0]]} > {hops}")
    missing = sorted(instance.terminals - set(depth))
    if missing:
        problems.append(f"terminal {missing[0]} is not covered")
    actual = sum(instance.metric.dist[c][p] for c, p in parent.items())
    if actual != solution["cost"]:
        problems.append(
            f"cost mismatch: claimed {format_cost(solution['cost'])}, edges sum to {format_cost(actual)}"
        )
    for v, lab in solution.get("labels", {}).items():
        if depth.get(v, INF) != lab:
            problems.append(f"label of vertex {v} disagrees with its depth")
            break
    return problems
