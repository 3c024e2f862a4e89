"""Compare the compiled and pure-Python CDCL cores on random 3-SAT.

    python3 benchmarks/bench_cdcl.py --vars 200 --ratio 4.26 --instances 10
"""

from __future__ import annotations

import argparse
import random
import time

from opsat.backend import sat


def random_3sat(nvars: int, nclauses: int, rng: random.Random) -> list[tuple[int, ...]]:
    return [tuple(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, nvars + 1), 3))
            for _ in range(nclauses)]


def run(core: str, nvars: int, clauses, branching: str):
    s = sat.make_solver(nvars, branching, core=core)
    for c in clauses:
        s.add_clause(c)
    start = time.perf_counter()
    res = s.solve()
    took = time.perf_counter() - start
    return res, took, (s.model() if res is True else None)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, default=200)
    ap.add_argument("--ratio", type=float, default=4.26)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--branching", choices=("vsids", "lowest"), default="vsids")
    args = ap.parse_args(argv)

    cores = ["python"] + (["compiled"] if sat.CompiledSolver is not None else [])
    rng = random.Random(args.seed)
    totals = dict.fromkeys(cores, 0.0)
    print(f"{'#':>3} {'result':>7} " + " ".join(f"{c:>10}" for c in cores))
    for k in range(args.instances):
        clauses = random_3sat(args.vars, round(args.ratio * args.vars), rng)
        results = {}
        for core in cores:
            res, took, model = run(core, args.vars, clauses, args.branching)
            if model is not None:
                assert all(any((l > 0) == model[abs(l)] for l in c) for c in clauses), core
            results[core] = res
            totals[core] += took
            print(f"{k:>3} {str(res):>7} " if core == cores[0] else "", end="")
            print(f"{took:9.4f}s ", end="")
        print()
        if len(set(results.values())) != 1:
            raise SystemExit(f"cores disagree on instance {k}: {results}")
    line = " ".join(f"{c}={totals[c]:.3f}s" for c in cores)
    if "compiled" in totals and totals["compiled"] > 0:
        line += f" speedup={totals['python'] / totals['compiled']:.1f}x"
    print(f"total {line}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
