"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input (the error class name is
printed on stderr), 3 when ``--check`` finds a cross-check mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import core
from .core import (
    Coupling,
    CostMatrix,
    Marginals,
    ValidationError,
    format_mass,
    uniform_marginals,
    validate_problem,
)
from .oracle import MONGE_MAX_N, SCAN_MAX_SIDE, brute_force_monge, threshold_scan
from .solvers import solve_bisect, solve_kantorovich, solve_monge, solve_relaxed

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3


class CheckFailed(Exception):
    pass


def read_cost_csv(path) -> CostMatrix:
    """Comma-separated decimal rows, no header."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise core.DimensionMismatch(f"{path}: empty cost matrix")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise core.DimensionMismatch(f"{path}: rows have differing lengths {sorted(widths)}")
    return CostMatrix(np.array(rows))


def read_weights(path) -> list:
    """One decimal per line, or a JSON array of decimal strings."""
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        items = json.loads(text)
        if not isinstance(items, list):
            raise ValidationError(f"{path}: expected a JSON array")
        return items
    return [line.strip().rstrip(",") for line in text.splitlines() if line.strip()]


def _marginals(args, C: CostMatrix) -> Marginals:
    if (args.a is None) != (args.b is None):
        raise ValidationError("--a and --b must be given together")
    if args.a is None:
        return uniform_marginals(C.n, C.m)
    return validate_problem(C, read_weights(args.a), read_weights(args.b))


def _plan_rows(plan) -> list:
    return [[i, j, format_mass(mass)] for i, j, mass in plan.triples()]


def _report(kind, value, witness, plan_rows, iterations, started, **extra) -> dict:
    doc = {
        "kind": kind,
        "value": value,
        "witness_edge": list(witness) if witness is not None else None,
        "plan": plan_rows,
        "iterations": iterations,
    }
    doc.update(extra)
    doc["wall_time_ms"] = round((time.perf_counter() - started) * 1000, 3)
    return doc


def _check_plan(C: CostMatrix, report, marg: Optional[Marginals] = None) -> None:
    support = report.plan.support()
    top = max(C[i, j] for i, j in support)
    if top != report.value or C[report.witness_edge] != report.value:
        raise CheckFailed("plan support maximum differs from the reported value")
    if report.witness_edge not in support:
        raise CheckFailed("witness edge is not in the plan support")
    if isinstance(report.plan, Coupling) and marg is not None:
        if report.plan.row_sums(C.n) != list(marg.a) or report.plan.col_sums(C.m) != list(marg.b):
            raise CheckFailed("coupling marginals are not exact")


def _cmd_monge(args) -> dict:
    C = read_cost_csv(args.cost)
    started = time.perf_counter()
    rep = solve_monge(C, per_edge=args.per_edge)
    doc = _report("monge", rep.value, rep.witness_edge, _plan_rows(rep.plan), rep.iterations, started)
    if args.check:
        _check_plan(C, rep)
        if C.n <= MONGE_MAX_N:
            ref = brute_force_monge(C)
        else:
            ref = solve_kantorovich(C, uniform_marginals(C.n, C.n)).value
        if ref != rep.value:
            raise CheckFailed(f"monge value {rep.value} != reference {ref}")
    return doc


def _cmd_kantorovich(args) -> dict:
    C = read_cost_csv(args.cost)
    marg = _marginals(args, C)
    started = time.perf_counter()
    rep = solve_kantorovich(C, marg, per_edge=args.per_edge)
    doc = _report(
        "kantorovich", rep.value, rep.witness_edge, _plan_rows(rep.plan), rep.iterations, started
    )
    if args.check:
        _check_plan(C, rep, marg)
        refs = [solve_bisect(C, marg).value]
        if max(C.shape) <= SCAN_MAX_SIDE:
            refs.append(threshold_scan(C, marg))
        if any(r != rep.value for r in refs):
            raise CheckFailed(f"kantorovich value {rep.value} != references {refs}")
    return doc


def _cmd_relaxed(args) -> dict:
    C = read_cost_csv(args.cost)
    started = time.perf_counter()
    sol = solve_relaxed(C, eps=args.tol)
    weighted = sol.plan * C.values
    witness = tuple(int(x) for x in np.unravel_index(int(np.argmax(weighted)), C.shape))
    rows = [
        [i, j, repr(float(sol.plan[i, j]))]
        for i in range(C.n)
        for j in range(C.m)
        if sol.plan[i, j] > 0
    ]
    doc = _report(
        "relaxed", sol.value, witness, rows, sol.iterations, started, tolerance=sol.tolerance
    )
    if args.check:
        bound = solve_monge(C).value
        if sol.value > bound + max(sol.tolerance, 1e-12):
            raise CheckFailed(f"relaxed value {sol.value} exceeds the Monge value {bound}")
        ones = np.ones(C.n)
        if not (np.allclose(sol.plan.sum(0), ones, atol=1e-9) and np.allclose(sol.plan.sum(1), ones, atol=1e-9)):
            raise CheckFailed("relaxed plan is not doubly stochastic")
    return doc


def _cmd_oracle(args) -> dict:
    C = read_cost_csv(args.cost)
    started = time.perf_counter()
    if args.problem == "monge":
        value = brute_force_monge(C)
        doc = _report("oracle", value, None, [], None, started, problem="monge")
        if args.check and solve_monge(C).value != value:
            raise CheckFailed("oracle and solve_monge disagree")
    else:
        marg = _marginals(args, C)
        value = threshold_scan(C, marg)
        doc = _report("oracle", value, None, [], None, started, problem="kantorovich")
        if args.check and solve_kantorovich(C, marg).value != value:
            raise CheckFailed("oracle and solve_kantorovich disagree")
    return doc


def bench_instances(sizes, trials: int, seed: int):
    """Seeded random instances: uniform [0, 1) costs, uniform weights."""
    rng = np.random.default_rng(seed)
    for n in sizes:
        yield n, [rng.random((n, n)) for _ in range(trials)]


def _cmd_bench(args) -> dict:
    started = time.perf_counter()
    results = []
    for n, mats in bench_instances(args.sizes, args.trials, args.seed):
        marg = uniform_marginals(n, n)
        monge_ms, kant_ms, monge_vals, kant_vals = [], [], [], []
        for M in mats:
            C = CostMatrix(M)
            t0 = time.perf_counter()
            monge_vals.append(solve_monge(C, per_edge=args.per_edge).value)
            t1 = time.perf_counter()
            kant_vals.append(solve_kantorovich(C, marg, per_edge=args.per_edge).value)
            t2 = time.perf_counter()
            monge_ms.append((t1 - t0) * 1000)
            kant_ms.append((t2 - t1) * 1000)
        if args.check and monge_vals != kant_vals:
            raise CheckFailed(f"size {n}: monge and kantorovich values differ")
        results.append(
            {
                "size": n,
                "trials": len(mats),
                "monge_median_ms": round(statistics.median(monge_ms), 3),
                "kantorovich_median_ms": round(statistics.median(kant_ms), 3),
                "monge_values": monge_vals,
                "kantorovich_values": kant_vals,
            }
        )
    doc = {"kind": "bench", "seed": args.seed, "results": results}
    doc["wall_time_ms"] = round((time.perf_counter() - started) * 1000, 3)
    return doc


def _format_text(doc: dict) -> str:
    lines = []
    for key, val in doc.items():
        if key == "plan":
            lines.append("plan:")
            lines.extend(f"  {i} {j} {mass}" for i, j, mass in val)
        elif key == "results":
            for row in val:
                lines.append(
                    f"size {row['size']}: monge {row['monge_median_ms']} ms, "
                    f"kantorovich {row['kantorovich_median_ms']} ms (median of {row['trials']})"
                )
        elif key == "witness_edge" and val is not None:
            lines.append(f"witness_edge: {val[0]} {val[1]}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, suppress):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        p.add_argument("--format", choices=["json", "text"], **(kw or {"default": "json"}))
        p.add_argument("--per-edge", action="store_true", **kw,
                       help="literal sweep: from-scratch check per admitted edge")
        p.add_argument("--check", action="store_true", **kw,
                       help="cross-check against oracles/other solvers; exit 3 on mismatch")

    parser = argparse.ArgumentParser(prog="infot", description="Exact bottleneck (infinity) optimal transport.")
    add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monge", parents=[common], help="bottleneck assignment on a square matrix")
    p.add_argument("--cost", required=True)
    p.set_defaults(func=_cmd_monge)

    p = sub.add_parser("kantorovich", parents=[common], help="bottleneck transport with weights")
    p.add_argument("--cost", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.set_defaults(func=_cmd_kantorovich)

    p = sub.add_parser("relaxed", parents=[common], help="relaxed minimax LP by bisection")
    p.add_argument("--cost", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_relaxed)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference value")
    p.add_argument("problem", choices=["monge", "kantorovich"])
    p.add_argument("--cost", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", parents=[common], help="time the solvers on random instances")
    p.add_argument("--sizes", type=_sizes, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        name = type(exc).__name__ if isinstance(exc, ValidationError) else "InvalidInput"
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CheckFailed as exc:
        print(f"CheckFailed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    if args.format == "text":
        print(_format_text(doc))
    else:
        print(json.dumps(doc))
    return EXIT_OK


run = main

if __name__ == "__main__":
    sys.exit(main())
