"""Command-line front end: solve, verify, gen, bench.

Reports are deterministic functions of (instance bytes, arguments, seed);
timing never enters the JSON reports, only the bench CSV.  The bench
worker pool is capped by the MINA_THREADS environment variable and its
output rows keep input order.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import connectivity, coverage, exact, preprocess, verify
from .instance import (
    GenerationError,
    Instance,
    InvariantError,
    ParseError,
    generate_random,
    parse_assignment,
    parse_instance,
    serialize,
)
from .seeding import DEFAULT_MASTER_SEED, mix64

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3

ALGOS = (
    "coverage:k",
    "coverage:logm",
    "coverage:exact",
    "connectivity:logm2",
    "connectivity:exact",
)

BENCH_COLUMNS = [
    "instance",
    "algo",
    "n",
    "m",
    "k",
    "lp_bound",
    "cost",
    "exact_opt",
    "ratio_vs_exact",
    "ratio_vs_lp",
    "feasible_rate",
    "wall_time",
    "error",
]


def _load_instance(path: str) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return parse_instance(text)
    except (ParseError, InvariantError) as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(report: dict, out_format: str) -> None:
    if out_format == "json":
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        for key in sorted(report):
            print(f"{key}: {report[key]}")


def _run_algo(inst: Instance, algo: str, seed: int, trials: int, budget: int):
    """Dispatch one solve; returns (assignment_or_None, report)."""
    if algo == "coverage:k":
        return coverage.solve_coverage(inst, "k-threshold", seed=seed)
    if algo == "coverage:logm":
        return coverage.solve_coverage(
            inst, "randomized", seed=seed, restarts_floor=trials
        )
    if algo == "coverage:exact":
        return coverage.solve_coverage(inst, "exact", seed=seed, exact_budget=budget)
    if algo == "connectivity:logm2":
        return connectivity.solve_connectivity(inst, seed=seed, restarts_floor=trials)
    if algo == "connectivity:exact":
        cost, a = exact.exact_connectivity(inst, budget=budget)
        report = {
            "problem": "connectivity",
            "algo": algo,
            "seed": seed,
            "b": None,
            "trials": 1,
            "lp_bound": None,
            "max_cost": str(cost),
            "max_cost_float": float(cost),
            "feasible": True,
        }
        return a, report
    raise ValueError(f"unknown algo {algo!r}")


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        assignment, report = _run_algo(inst, args.algo, args.seed, args.trials, args.budget)
    except exact.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report["algo"] = args.algo
    _emit(report, args.out)
    if assignment is None or not report.get("feasible", False):
        return EXIT_INFEASIBLE
    if args.assignment_out:
        from .instance import serialize_assignment

        Path(args.assignment_out).write_text(serialize_assignment(assignment, inst))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        text = Path(args.assignment).read_text()
        assignment = parse_assignment(text, inst)
    except OSError as exc:
        print(f"error: cannot read {args.assignment}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as exc:
        print(f"error: {args.assignment}: {exc}", file=sys.stderr)
        return EXIT_PARSE

    cost, per_vertex = verify.max_cost(inst, assignment)
    if args.mode == "covering":
        ok, uncovered = verify.is_covering(inst, assignment)
        diagnosis = {
            "mode": "covering",
            "feasible": ok,
            "uncovered_edges": [list(e) for e in uncovered],
            "max_cost": str(cost),
        }
    else:
        ok, detail = verify.is_connecting(inst, assignment)
        diagnosis = {
            "mode": "connecting",
            "feasible": ok,
            "detail": detail,
            "max_cost": str(cost),
        }
    print(json.dumps(diagnosis, sort_keys=True, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        inst = generate_random(
            n=args.n,
            k=args.k,
            edge_density=args.density,
            cost_range=(args.cost_lo, args.cost_hi),
            num_groups=args.groups,
            group_size=args.group_size,
            seed=args.seed,
        )
    except (ValueError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = serialize(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _feasible_rate(inst: Instance, algo: str, seed: int, trials: int) -> tuple[float, Fraction | None]:
    """Per-trial feasibility rate of a randomized rounding, plus best cost."""
    successes = 0
    best: Fraction | None = None
    if algo == "coverage:logm":
        guesses = preprocess.enumerate_guesses(inst)
        if not guesses:
            return 0.0, None
        s = guesses[0]
        frac = coverage.solve_coverage_lp(s, include_cost_floor=True)
        for t in range(trials):
            a = coverage.round_randomized_coverage(s, frac, mix64(seed, t))
            if verify.is_covering(inst, a)[0]:
                successes += 1
                cost, _ = verify.max_cost(inst, a)
                best = cost if best is None else min(best, cost)
    elif algo == "connectivity:logm2":
        guesses = preprocess.enumerate_guesses(inst)
        if not guesses:
            return 0.0, None
        s = guesses[0]
        frac, _ = connectivity.solve_connectivity_lp(s, include_cost_floor=True)
        for t in range(trials):
            h = connectivity.sample_h(frac, inst.edges, inst.m, mix64(seed, t, 1))
            a, _ = connectivity.iterative_rounding(s, frac, h, mix64(seed, t, 2))
            if verify.is_connecting(inst, a)[0]:
                successes += 1
                cost, _ = verify.max_cost(inst, a)
                best = cost if best is None else min(best, cost)
    else:
        raise ValueError(algo)
    return successes / trials, best


def _bench_row(path_or_inst, name: str, algo: str, seed: int, trials: int, budget: int) -> dict:
    row = {col: "" for col in BENCH_COLUMNS}
    row["instance"] = name
    row["algo"] = algo
    try:
        if isinstance(path_or_inst, Instance):
            inst = path_or_inst
        else:
            inst = parse_instance(Path(path_or_inst).read_text())
        row["n"], row["m"], row["k"] = inst.n, inst.m, inst.k

        start = time.perf_counter()
        if algo.startswith("connectivity"):
            lp_bound = connectivity.raw_lp_bound(inst) if inst.groups else None
        else:
            lp_bound = coverage.raw_lp_bound(inst)
        if lp_bound is not None:
            row["lp_bound"] = f"{lp_bound:.9g}"

        if algo in ("coverage:logm", "connectivity:logm2"):
            rate, best = _feasible_rate(inst, algo, seed, trials)
            row["feasible_rate"] = f"{rate:.4f}"
            cost = best
        else:
            assignment, report = _run_algo(inst, algo, seed, trials, budget)
            row["feasible_rate"] = "1.0000" if report.get("feasible") else "0.0000"
            cost = None
            if report.get("max_cost") is not None:
                cost = Fraction(report["max_cost"])
        row["wall_time"] = f"{time.perf_counter() - start:.4f}"

        if cost is not None:
            row["cost"] = str(float(cost))
            if lp_bound is not None and lp_bound > 0:
                row["ratio_vs_lp"] = f"{float(cost) / lp_bound:.6f}"

        try:
            if algo.startswith("connectivity"):
                opt, _ = exact.exact_connectivity(inst, budget=budget)
            else:
                opt, _ = exact.exact_coverage(inst, budget=budget)
            row["exact_opt"] = str(float(opt))
            if cost is not None and opt > 0:
                row["ratio_vs_exact"] = f"{float(cost) / float(opt):.6f}"
        except exact.BudgetExceeded:
            pass
    except Exception as exc:  # never abort the batch
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _parse_gen_spec(spec: str) -> dict:
    out = {}
    for part in spec.split(","):
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    return out


def cmd_bench(args: argparse.Namespace) -> int:
    jobs: list[tuple[object, str]] = []
    if args.instances:
        paths = sorted(Path(args.instances).glob("*.mina")) or sorted(
            p for p in Path(args.instances).iterdir() if p.is_file()
        )
        jobs = [(str(p), p.name) for p in paths]
    elif args.gen:
        spec = _parse_gen_spec(args.gen)
        count = int(spec.get("count", 10))
        for idx in range(count):
            inst = generate_random(
                n=int(spec.get("n", 7)),
                k=int(spec.get("k", 3)),
                edge_density=float(spec.get("density", 0.4)),
                cost_range=(spec.get("cost_lo", "0"), spec.get("cost_hi", "1")),
                num_groups=int(spec.get("groups", 0)),
                group_size=int(spec.get("group_size", 0)),
                seed=mix64(args.seed, idx),
            )
            jobs.append((inst, f"gen-{idx}"))
    else:
        print("error: bench needs --instances or --gen", file=sys.stderr)
        return EXIT_PARSE

    algos = args.algos.split(",") if args.algos else ["coverage:k"]
    for algo in algos:
        if algo not in ALGOS:
            print(f"error: unknown algo {algo!r}", file=sys.stderr)
            return EXIT_PARSE

    tasks = [
        (src, name, algo) for src, name in jobs for algo in algos
    ]
    workers = max(1, int(os.environ.get("MINA_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    lambda t: _bench_row(t[0], t[1], t[2], args.seed, args.trials, args.budget),
                    tasks,
                )
            )
    else:
        rows = [
            _bench_row(src, name, algo, args.seed, args.trials, args.budget)
            for src, name, algo in tasks
        ]

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mina",
        description="Min-max interface activation solvers for multi-interface networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=DEFAULT_MASTER_SEED)
        p.add_argument("--trials", type=int, default=3, help="restarts / rounding trials")
        p.add_argument("--out", choices=("json", "text"), default="json")
        p.add_argument("--budget", type=int, default=24, help="exact-oracle slot cap")

    p_solve = sub.add_parser("solve", help="solve an instance")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument("--algo", choices=ALGOS, required=True)
    p_solve.add_argument("--assignment-out", default=None)
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="audit an assignment")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--assignment", required=True)
    p_verify.add_argument("--mode", choices=("covering", "connecting"), default="covering")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("-n", type=int, required=True)
    p_gen.add_argument("-k", type=int, required=True)
    p_gen.add_argument("--density", type=float, default=0.4)
    p_gen.add_argument("--cost-lo", default="0")
    p_gen.add_argument("--cost-hi", default="1")
    p_gen.add_argument("--groups", type=int, default=0)
    p_gen.add_argument("--group-size", type=int, default=0)
    p_gen.add_argument("-o", "--output", default=None)
    common(p_gen)
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="benchmark algorithms over instances")
    p_bench.add_argument("--instances", default=None, help="directory of instance files")
    p_bench.add_argument("--gen", default=None, help="generator spec, e.g. count=10,n=7,k=3")
    p_bench.add_argument("--algos", default="coverage:k", help="comma-separated algo list")
    p_bench.add_argument("-o", "--output", default=None)
    common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
