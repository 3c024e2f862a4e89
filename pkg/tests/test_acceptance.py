"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

import pytest

from opsat.backend.enumerate import sat_enumerate
from opsat.backend.external import parse_solver_output
from opsat.backend.instance import OPTIMUM
from opsat.backend.wcnf import parse_wcnf, write_wcnf
from opsat.bench import DESK_SUITE, read_suite
from opsat.cli import precision_sweep, run_bench_row
from opsat.codec import BitWidth, word_pattern_value
from opsat.encoder import conformance as cf
from opsat.encoder import rules
from opsat.encoder.emitter import Emitter
from opsat.encoder.tree import reduce_model
from opsat.evaluator import brute_force_optimum
from opsat.pipeline import RunConfig, run_ground

from conftest import data_text, ground, model_text
from randmodels import random_model


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_criterion_1_rule_counts(verdict):
    start = time.monotonic()
    results = cf.check_counts()
    took = time.monotonic() - start
    bad = [r for r in results if not r.ok]
    rules_off = sorted({r.case.rule for r in bad})
    verdict(1, not bad and took < 1.0,
            f"{len(results) - len(bad)}/{len(results)} count cases match closed forms in "
            f"{took:.2f}s; mismatching rules: {', '.join(rules_off) or 'none'}")


def test_criterion_2_rule_semantics(verdict):
    tally = {"PASS": 0, "DEVIATION": 0, "FAIL": 0}
    failed = []
    for rule, n, m, params in cf.semantic_cases():
        v = cf.rule_verdict(rule, n, m, params)
        tally[v] += 1
        if v == "FAIL":
            failed.append(f"{rule}{list(params)}@({n},{m})")
    verdict(2, not failed,
            f"pass={tally['PASS']} deviation(corrected passes)={tally['DEVIATION']} "
            f"fail={tally['FAIL']} {' '.join(failed)}")


def _pipeline(gm, width):
    rep = run_ground(gm, RunConfig(), width)
    if rep.status == "infeasible":
        return None
    return rep.objective if rep.status == "optimum" and rep.feasible else "bad"


def test_criterion_3_oracle_equivalence(verdict):
    cases = [(random_model(s), "", BitWidth(8, 1)) for s in range(24)]
    cases += [(model_text("mkp"), data_text("knapsack_tiny"), BitWidth(4, 0)),
              (model_text("gcp"), data_text("triangle"), BitWidth(3, 0))]
    wrong = []
    for k, (text, data, width) in enumerate(cases):
        gm = ground(text, data)
        bf = brute_force_optimum(gm)
        if _pipeline(gm, width) != (bf.value if bf.feasible else None):
            wrong.append(k)
    verdict(3, not wrong, f"{len(cases) - len(wrong)}/{len(cases)} models agree with "
                          f"exhaustive enumeration; disagreeing cases {wrong}")


DESK_ROWS = ("myciel3", "queen5_5", "mknap1-1", "esc16f", "sphere_d10")


def test_criterion_4_desk_values(verdict):
    args = argparse.Namespace(solver=None, time_limit=None, branching="vsids")
    rows = [r for r in read_suite(DESK_SUITE) if r.name in DESK_ROWS]
    assert sorted(r.name for r in rows) == sorted(DESK_ROWS)
    sphere = next(r for r in rows if r.name == "sphere_d10")
    assert sphere.tolerance == 10 * Fraction(1, 2 ** 20) ** 2
    parts, ok = [], True
    for row in rows:
        v, detail, took = run_bench_row(row, args)
        ok &= v == "PASS"
        parts.append(f"{row.name}={v}({detail.split('objective=')[-1].split()[0]}, {took:.1f}s)")
    verdict(4, ok, " ".join(parts))


def test_criterion_5_precision_sweep(verdict):
    rows = precision_sweep(model_text("sphere"), data_text("sphere_d1_o03"), 10, range(1, 7))
    errs = [r["error"] for r in rows]
    # grid slack: the optimizer itself is stored at the nearest grid point
    within = all(e <= 2.0 ** (-m - 1) + 1e-12 for m, e in zip(range(1, 7), errs))
    monotone = all(b <= a for a, b in zip(errs, errs[1:]))
    verdict(5, within and monotone and all(r["status"] == "optimum" for r in rows),
            "errors " + ", ".join(f"m={r['m']}:{r['error']:.6g}" for r in rows))


def test_criterion_6_normalization_identity(verdict):
    start = time.monotonic()
    w = BitWidth(2, 0)
    em = Emitter()
    mu, mu_hat = em.fresh_word(w), em.fresh_word(w)
    rules.normalization(em, mu, mu_hat)
    sols = sat_enumerate(em.finish(), list(mu.bits) + list(mu_hat.bits))
    k = w.size
    pairs = {(word_pattern_value(s[:k], w), sum(b << i for i, b in enumerate(s[k:])))
             for s in sols}
    values = sorted(v for v, _ in pairs)
    identity = pairs == {(x, int(x) + 4) for x in w.grid()} and len(set(values)) == 7
    totals = [t for _, t in sorted(pairs)]
    monotone = all(a < b for a, b in zip(totals, totals[1:]))
    took = time.monotonic() - start
    verdict(6, identity and monotone and took < 1.0,
            "mu->total " + " ".join(f"{int(v)}:{t}" for v, t in sorted(pairs)) + f" in {took:.3f}s")


def _mkp_data(items: int, dims: int = 3, seed: int = 0) -> str:
    r = random.Random(seed)
    w = {(i, j): r.randint(1, 20) for j in range(1, dims + 1) for i in range(1, items + 1)}
    out = [f"n = {items}", f"m = {dims}"]
    out += [f"v_{{{i}}} = {r.randint(1, 30)}" for i in range(1, items + 1)]
    out += [f"w_{{{i},{j}}} = {v}" for (i, j), v in w.items()]
    out += [f"W_{{{j}}} = {sum(w[i, j] for i in range(1, items + 1)) // 2}"
            for j in range(1, dims + 1)]
    return "\n".join(out) + "\n"


def test_criterion_7_linear_growth(verdict):
    sizes = (5, 10, 20, 40)
    counts = [len(reduce_model(ground("mkp", _mkp_data(k)), BitWidth(15, 5)).instance.hard)
              for k in sizes]
    # least-squares line through (items, hard clauses)
    mx = sum(sizes) / len(sizes)
    my = sum(counts) / len(counts)
    slope = sum((x - mx) * (y - my) for x, y in zip(sizes, counts)) / sum((x - mx) ** 2 for x in sizes)
    icpt = my - slope * mx
    worst = max(abs(y - (icpt + slope * x)) / y for x, y in zip(sizes, counts))
    verdict(7, worst <= 0.10 and slope > 0,
            f"hard clauses {dict(zip(sizes, counts))}, max deviation from linear fit {worst:.1%}")


def test_criterion_8_format_interop(verdict):
    red = reduce_model(ground("mkp", data_text("mknap1-1")), BitWidth(15, 5))
    text = write_wcnf(red.instance)
    back = parse_wcnf(text)
    roundtrip = (back.hard == red.instance.hard and back.soft == red.instance.soft
                 and write_wcnf(back) == text)
    literal = parse_solver_output("c s1\no 5\ns OPTIMUM FOUND\nv 1 -2 3\nv -4 0\n", 4)
    bits = parse_solver_output("c s2\no 5\ns OPTIMUM FOUND\nv 1010\n", 4)
    dialects = all(r.status == OPTIMUM and r.cost == 5 and r.assignment[1:] == [1, 0, 1, 0]
                   for r in (literal, bits))
    verdict(8, roundtrip and dialects,
            f"wcnf round trip {'exact' if roundtrip else 'differs'} "
            f"({len(back.hard)} hard, {len(back.soft)} soft); v-line dialects "
            f"{'agree' if dialects else 'disagree'}")
