"""Command line: ``khopst solve|gen|verify|bench|net``.

Exit codes: 0 ok, 2 unreadable or mismatched input, 3 infeasible or over
budget, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from decimal import Decimal, InvalidOperation

from .decomposition import InvalidDecomposition
from .formats import (
    ClassMismatch,
    ParseError,
    parse_instance,
    parse_solution_text,
    parse_td,
    solution_json,
    verify_solution,
)
from .generate import KINDS, generate_text
from .metric import SCALE, KhopError, format_cost
from .netlift import net_pipeline
from .oracle import TooLarge
from .path_dp import NotAPathOrder
from .solvers import ALGOS, DEFAULT_BUDGET, solve, tree_solver_for
from .tree_dp import NotATreeMetric
from .twdp import BudgetExceeded, InfeasibleInstance

EXIT_OK, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4
BENCH_HEADER = ["instance", "algo", "k", "cost", "ms", "cells", "agree"]

INPUT_ERRORS = (ParseError, ClassMismatch, InvalidDecomposition, NotAPathOrder, NotATreeMetric, OSError)
SOLVE_ERRORS = (BudgetExceeded, InfeasibleInstance, TooLarge)


def _amount(text: str) -> int:
    try:
        value = Decimal(text) * SCALE
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a decimal: {text!r}") from None
    if value < 0 or value != value.to_integral_value():
        raise argparse.ArgumentTypeError("expected a nonnegative decimal with at most 6 fractional digits")
    return int(value)


def _load(args):
    instance, declared = parse_instance(args.instance)
    if getattr(args, "k", None) is not None:
        instance = instance.with_k(args.k)
    td = parse_td(args.td) if getattr(args, "td", None) else None
    return instance, declared, td


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_solve(args) -> int:
    instance, _, td = _load(args)
    res = solve(instance, args.algo, td=td, budget=args.budget, force=args.force)
    _emit(solution_json(instance, res.tree, res.cost), args.json)
    print(f"cost {format_cost(res.cost)} algo {res.algo} cells {res.cells}", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    text, td_text = generate_text(
        args.kind, args.n, args.seed, k=args.k, wmin=args.wmin, wmax=args.wmax,
        density=args.density, kgen=args.kgen, root=args.root,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if td_text is not None:
        td_path = args.td_out or (os.path.splitext(args.out)[0] + ".td" if args.out else None)
        if td_path:
            with open(td_path, "w", encoding="utf-8") as fh:
                fh.write(td_text)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance, _, _ = _load(args)
    with open(args.solution, encoding="utf-8") as fh:
        solution = parse_solution_text(fh.read())
    problems = verify_solution(instance, solution, hops=args.hops)
    if problems:
        for p in problems:
            print(f"INVALID: {p}")
        return EXIT_VERIFY
    print(f"valid: cost {format_cost(solution['cost'])}, hop bound {args.hops or instance.k}")
    return EXIT_OK


def bench_rows(paths, algos, k=None, budget=DEFAULT_BUDGET, force=False):
    rows = []
    for path in paths:
        td_path = os.path.splitext(path)[0] + ".td"
        try:
            instance, _ = parse_instance(path)
            td = parse_td(td_path) if os.path.exists(td_path) else None
        except (KhopError, OSError) as exc:
            rows += [[path, a, "", f"error: {type(exc).__name__}", "", "", ""] for a in algos]
            continue
        if k is not None:
            instance = instance.with_k(k)
        group = []
        for algo in algos:
            start = time.perf_counter()
            try:
                res = solve(instance, algo, td=td, budget=budget, force=force)
            except BudgetExceeded:
                group.append([path, algo, instance.k, "budget-exceeded", "", "", None])
                continue
            except (KhopError, ValueError) as exc:
                group.append([path, algo, instance.k, f"error: {type(exc).__name__}", "", "", None])
                continue
            ms = (time.perf_counter() - start) * 1000
            group.append([path, algo, instance.k, res.cost, f"{ms:.1f}", res.cells, None])
        costs = {row[3] for row in group if isinstance(row[3], int)}
        for row in group:
            if isinstance(row[3], int):
                row[6] = "yes" if len(costs) == 1 else "no"
                row[3] = format_cost(row[3])
            else:
                row[6] = ""
        rows += group
    rows.sort(key=lambda row: (row[0], ALGOS.index(row[1]) if row[1] in ALGOS else 99))
    return rows


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    rows = bench_rows(args.instances, algos, args.k, args.budget, args.force)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    writer.writerows(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_net(args) -> int:
    instance, _, _ = _load(args)
    solver = tree_solver_for(args.algo, budget=args.budget, force=args.force)
    res = net_pipeline(instance, args.delta, solver)
    _emit(solution_json(instance, res.tree, res.cost), args.json)
    print(
        f"net size {len(res.net.net)} net cost {format_cost(res.net_cost)} "
        f"lift {format_cost(res.lift_cost)} <= n*delta {format_cost(res.bound)} "
        f"hops <= {instance.k + 1}",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khopst", description="Exact minimum-cost k-hop Steiner trees")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p, algos=ALGOS):
        p.add_argument("instance")
        p.add_argument("--algo", choices=algos, default="treewidth")
        p.add_argument("--k", type=int, help="override the hop bound in the file")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="treewidth state-space budget")
        p.add_argument("--force", action="store_true", help="ignore the budget")
        p.add_argument("--json", metavar="OUT", help="write the solution JSON here instead of stdout")

    p = sub.add_parser("solve", help="solve an instance exactly")
    solver_flags(p)
    p.add_argument("--td", help="tree decomposition file (treewidth solver)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--wmin", type=int, default=1)
    p.add_argument("--wmax", type=int, default=10)
    p.add_argument("--density", type=float, default=0.5, help="terminal probability per vertex")
    p.add_argument("--kgen", type=int, default=2, help="treewidth bound for partial-ktree")
    p.add_argument("--root", type=int)
    p.add_argument("--out", help="instance file (default stdout)")
    p.add_argument("--td-out", help="decomposition file for partial-ktree (default: OUT with a .td suffix)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a solution JSON against an instance")
    p.add_argument("solution")
    p.add_argument("instance")
    p.add_argument("--hops", type=int, help="hop bound to check (default: the instance's k)")
    p.add_argument("--k", type=int, help="override the hop bound in the file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run several solvers on several instances, CSV out")
    p.add_argument("instances", nargs="*")
    p.add_argument("--algos", default=",".join(ALGOS))
    p.add_argument("--k", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--force", action="store_true")
    p.add_argument("--csv", help="output file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("net", help="delta-net pipeline: exact on the net, then a (k+1)-hop lift")
    solver_flags(p)
    p.add_argument("--delta", type=_amount, required=True)
    p.set_defaults(func=cmd_net)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SOLVE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (KhopError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
