"""Command-line entry point: ``opsat {solve,reduce,check,bench,sweep-precision,conformance}``.

Exit codes: 0 ok, 1 other failure (including failed bench rows), 2 usage,
3 parse, 4 grounding, 5 encoding, 6 solver, 7 time limit, 8 evaluation or
infeasible decode, 9 infeasible model or violated solution.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bench
from .codec import NEAREST, REJECT, BitWidth
from .errors import OpsatError
from .grounder.nodes import GVar
from .grounder.printer import fmt_number
from .pipeline import (
    EXTERNAL, INTERNAL, RunConfig, check_solution, load_ground, read_text,
    reduce_only, run_ground, run_pipeline,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INFEASIBLE = 9
EXIT_TIMEOUT = 7


def _width_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--int-bits", "-n", type=int, default=None, help="integer bits n")
    p.add_argument("--frac-bits", "-m", type=int, default=None, help="fractional bits m")
    p.add_argument("--rounding", choices=(REJECT, NEAREST), default=REJECT,
                   help="constants that are not on the grid: reject or round to nearest")
    p.add_argument("--strict-domains", action="store_true",
                   help="reject variables without a declared domain")


def _solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--solver", metavar="CMD", default=None,
                   help="external MaxSAT solver command (the WCNF path is appended)")
    g.add_argument("--internal", action="store_true", help="use the built-in solver (default)")
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--branching", choices=("vsids", "lowest"), default="vsids",
                   help="branching heuristic of the built-in solver")


def _config(args, model=None, data=None) -> RunConfig:
    return RunConfig(
        model_path=model if model is not None else getattr(args, "model", None),
        data_path=data if data is not None else getattr(args, "data", None),
        n=args.int_bits, m=args.frac_bits, rounding=args.rounding,
        backend=EXTERNAL if getattr(args, "solver", None) else INTERNAL,
        solver_command=getattr(args, "solver", None),
        time_limit=getattr(args, "time_limit", None),
        wcnf_path=getattr(args, "emit_wcnf", None),
        varmap_path=getattr(args, "emit_varmap", None),
        report_path=getattr(args, "report", None),
        strict_domains=args.strict_domains,
        branching=getattr(args, "branching", "vsids"),
        timings=not getattr(args, "no_timings", False),
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opsat",
                                 description="Solve optimization models through weighted MaxSAT.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="parse, ground, reduce, solve and verify a model")
    p.add_argument("model")
    p.add_argument("data", nargs="?")
    _width_flags(p)
    _solver_flags(p)
    p.add_argument("--emit-wcnf", metavar="PATH")
    p.add_argument("--emit-varmap", metavar="PATH")
    p.add_argument("--report", metavar="PATH", help="also write the key=value report here")
    p.add_argument("--verbose", "-v", action="store_true", help="print per-constraint verdicts")
    p.add_argument("--no-timings", action="store_true",
                   help="omit wall-clock keys so identical runs give identical reports")

    p = sub.add_parser("reduce", help="write the MaxSAT instance and varmap without solving")
    p.add_argument("model")
    p.add_argument("data", nargs="?")
    _width_flags(p)
    p.add_argument("--emit-wcnf", metavar="PATH", help="WCNF output (default: stdout)")
    p.add_argument("--emit-varmap", metavar="PATH")

    p = sub.add_parser("check", help="verify a solution file against a model")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("solution")

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("suite", nargs="?", help="suite file (default: the shipped desk suite)")
    p.add_argument("--full", action="store_true",
                   help="run the published-size rows as well (needs fetched data)")
    _solver_flags(p)
    p.add_argument("--only", metavar="PROBLEM", action="append",
                   help="restrict to these problem ids")

    p = sub.add_parser("sweep-precision", help="distance to a known optimizer across widths")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--int-bits", "-n", type=int, default=10)
    p.add_argument("--m-range", default="1..6", help="fractional bits, inclusive: A..B")
    p.add_argument("--var", default="x", help="decision-variable base name")
    p.add_argument("--optimizer", default="o", help="data symbol holding the known optimizer")
    _solver_flags(p)

    p = sub.add_parser("conformance", help="clause counts and semantics of every rule")
    p.add_argument("--counts-only", action="store_true")
    p.add_argument("--fixes", choices=("published", "corrected"), default="published",
                   help="rule variant whose counts are compared to the closed forms")
    return ap


# -- commands -----------------------------------------------------------------------

def cmd_solve(args) -> int:
    cfg = _config(args)
    report = run_pipeline(cfg)
    sys.stdout.write(report.text(cfg.timings))
    if args.verbose and report.feasibility is not None:
        for v in report.feasibility.verdicts:
            print(f"{'ok  ' if v.satisfied else 'FAIL'} {v.origin}: {v.text}")
    if report.status == "infeasible":
        return EXIT_INFEASIBLE
    if report.status in ("timeout", "unknown"):
        return EXIT_TIMEOUT
    return EXIT_OK


def cmd_reduce(args) -> int:
    cfg = _config(args)
    to_stdout = cfg.wcnf_path is None
    gm, red = reduce_only(cfg)
    if to_stdout:
        from .backend.wcnf import write_wcnf
        sys.stdout.write(write_wcnf(red.instance))
    out = sys.stderr if to_stdout else sys.stdout
    print(f"int_bits={red.width.n}", file=out)
    print(f"frac_bits={red.width.m}", file=out)
    for k, v in red.stats.items():
        print(f"{k}={v}", file=out)
    return EXIT_OK


def cmd_check(args) -> int:
    rep = check_solution(read_text(args.model), read_text(args.data), read_text(args.solution))
    for v in rep.verdicts:
        line = f"{'ok  ' if v.satisfied else 'FAIL'} {v.origin}: {v.text}"
        if not v.satisfied and v.lhs is not None:
            line += f"  [lhs={fmt_number(v.lhs)}"
            line += f", rhs={fmt_number(v.rhs)}]" if v.rhs is not None else "]"
        print(line)
    print(f"feasible={'yes' if rep.feasible else 'no'}")
    print(f"objective={fmt_number(rep.objective)}")
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def run_bench_row(row: bench.BenchmarkEntry, args) -> tuple[str, str, float]:
    """(verdict, detail, seconds) for one suite row."""
    start = time.monotonic()
    if not row.data.exists():
        return "SKIP", f"missing {row.data.name} (run scripts/fetch_benchmarks.py)", 0.0
    if row.external_required and not args.solver:
        return "SKIP", "external solver required", 0.0
    cfg = RunConfig(n=row.n, m=row.m, rounding=row.rounding,
                    backend=EXTERNAL if args.solver else INTERNAL,
                    solver_command=args.solver, time_limit=args.time_limit,
                    branching=args.branching)
    try:
        gm, _ = load_ground(read_text(str(row.model)), read_text(str(row.data)))
        rep = run_ground(gm, cfg, BitWidth(row.n, row.m))
    except OpsatError as exc:
        return "FAIL", f"{type(exc).__name__}: {exc}", time.monotonic() - start
    took = time.monotonic() - start
    got = rep.objective
    detail = f"status={rep.status} objective={'-' if got is None else fmt_number(got)}"
    if rep.exact_objective is not None and rep.exact_objective != got:
        detail += f" exact={float(rep.exact_objective):.12g}"
    ok = rep.status == "optimum" and rep.feasible and row.matches(got)
    return ("PASS" if ok else "FAIL"), detail, took


def cmd_bench(args) -> int:
    paths = [Path(args.suite)] if args.suite else [bench.DESK_SUITE]
    if args.full:
        paths.append(bench.FULL_SUITE)
    rows = [r for p in paths for r in bench.read_suite(p)]
    if args.only:
        rows = [r for r in rows if r.problem in args.only]
    failed = 0
    print(f"{'verdict':7} {'problem':10} {'instance':16} {'expected':>10} {'(n,m)':>8} {'seconds':>8}  detail")
    for row in rows:
        verdict, detail, took = run_bench_row(row, args)
        failed += verdict == "FAIL"
        print(f"{verdict:7} {row.problem:10} {row.name:16} {fmt_number(row.expected):>10} "
              f"{f'({row.n},{row.m})':>8} {took:8.2f}  {detail}", flush=True)
    print(f"rows={len(rows)} failed={failed}")
    return EXIT_FAIL if failed else EXIT_OK


def _m_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",")]


def precision_sweep(model_text: str, data_text: str, n: int, ms, var: str = "x",
                    optimizer: str = "o", config: RunConfig | None = None) -> list[dict]:
    """Solve at each fractional width; error is the Euclidean distance to the known optimizer."""
    gm, known = load_ground(model_text, data_text)
    target = {idx: Fraction(v) for (name, idx), v in known.items()
              if name == optimizer and not isinstance(v, frozenset)}
    if not target:
        raise OpsatError(f"data binds no {optimizer}_i optimizer entries")
    rows = []
    for m in ms:
        cfg = config or RunConfig()
        cfg = RunConfig(rounding=NEAREST, backend=cfg.backend, solver_command=cfg.solver_command,
                        time_limit=cfg.time_limit, branching=cfg.branching)
        rep = run_ground(gm, cfg, BitWidth(n, m))
        x = {idx: rep.values.get(GVar(var, idx)) for idx in target}
        if any(v is None for v in x.values()):
            raise OpsatError(f"no decoded value for some {var}_i at m={m}")
        sq = sum((x[idx] - target[idx]) ** 2 for idx in target)
        rows.append({"m": m, "status": rep.status, "solution": x, "error_squared": sq,
                     "error": math.sqrt(sq), "objective": rep.objective})
    return rows


def cmd_sweep(args) -> int:
    cfg = RunConfig(backend=EXTERNAL if args.solver else INTERNAL, solver_command=args.solver,
                    time_limit=args.time_limit, branching=args.branching)
    rows = precision_sweep(read_text(args.model), read_text(args.data), args.int_bits,
                            _m_range(args.m_range), args.var, args.optimizer, cfg)
    print(f"{'m':>3} {'error':>14} {'bound':>14}  solution")
    dim = len(rows[0]["solution"]) if rows else 0
    for r in rows:
        bound = 2.0 ** (-r["m"] - 1) * math.sqrt(dim)
        sol = ", ".join(f"{args.var}_{{{','.join(map(str, k))}}}={fmt_number(v)}"
                        for k, v in sorted(r["solution"].items()))
        print(f"{r['m']:>3} {r['error']:>14.8g} {bound:>14.8g}  {sol}")
    return EXIT_OK


def cmd_conformance(args) -> int:
    from .encoder import conformance as cf
    from .encoder.emitter import CORRECTED, PUBLISHED
    fixes = PUBLISHED if args.fixes == "published" else CORRECTED
    counts = cf.check_counts(fixes=fixes)
    verdicts = {}
    if not args.counts_only:
        for rule, n, m, params in cf.semantic_cases():
            v = cf.rule_verdict(rule, n, m, params)
            key = (rule, n, m)
            # a rule is only as good as its worst parameter choice
            order = {"PASS": 0, "DEVIATION": 1, "FAIL": 2}
            if order[v] >= order.get(verdicts.get(key, "PASS"), 0):
                verdicts[key] = v
    sys.stdout.write(cf.format_report(counts, verdicts))
    bad_counts = sum(not r.ok for r in counts)
    bad_sem = sum(v == "FAIL" for v in verdicts.values())
    print(f"count_mismatches={bad_counts} semantic_failures={bad_sem}")
    return EXIT_FAIL if bad_sem else EXIT_OK


COMMANDS = {
    "solve": cmd_solve, "reduce": cmd_reduce, "check": cmd_check, "bench": cmd_bench,
    "sweep-precision": cmd_sweep, "conformance": cmd_conformance,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OpsatError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
