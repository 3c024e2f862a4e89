from __future__ import annotations

import itertools
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opsat.backend import sat
from opsat.backend.enumerate import sat_enumerate
from opsat.backend.external import (
    bundled_rc2_command,
    parse_solver_output,
    parse_v_line,
    run_external,
)
from opsat.backend.instance import OPTIMUM, UNKNOWN, UNSATISFIABLE, MaxSatInstance
from opsat.backend.internal import solve_internal
from opsat.backend.wcnf import parse_wcnf, write_wcnf
from opsat.errors import CapExceeded, SolverCrashed, UnparsableOutput


def brute_sat(clauses, nvars):
    for bits in itertools.product((0, 1), repeat=nvars):
        a = (0,) + bits
        if all(any((a[abs(l)] == 1) == (l > 0) for l in c) for c in clauses):
            return True
    return False


def brute_maxsat(inst: MaxSatInstance):
    best = None
    for bits in itertools.product((0, 1), repeat=inst.variable_count):
        a = [0, *bits]
        if inst.satisfies_hard(a):
            c = inst.cost(a)
            best = c if best is None or c < best else best
    return best


clause_st = st.lists(st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v])),
                     min_size=1, max_size=3)
cnf_st = st.lists(clause_st, max_size=40)

CORES = ["python"] + (["compiled"] if sat.CompiledSolver is not None else [])


@pytest.mark.parametrize("core", CORES)
@settings(max_examples=150, deadline=None)
@given(cnf_st)
def test_cdcl_matches_truth_table(core, clauses):
    s = sat.make_solver(8, core=core)
    ok = all(s.add_clause(c) for c in clauses)
    result = s.solve() if ok else False
    assert bool(result) == brute_sat(clauses, 8)
    if result:
        m = s.model()
        assert all(any((m[abs(l)] == 1) == (l > 0) for l in c) for c in clauses)


@pytest.mark.skipif(sat.CompiledSolver is None, reason="compiled core not built")
@settings(max_examples=100, deadline=None)
@given(cnf_st, st.lists(st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v])),
                        max_size=3))
def test_cores_agree_under_assumptions(clauses, assumptions):
    answers = []
    for core in ("python", "compiled"):
        s = sat.make_solver(8, core=core)
        ok = all(s.add_clause(c) for c in clauses)
        res = bool(s.solve(assumptions)) if ok else False
        answers.append((res, list(s.model()) if res else None))
    # same algorithm step for step, so even the models coincide
    assert answers[0] == answers[1]


def test_lowest_id_branching_available():
    s = sat.make_solver(3, branching="lowest")
    s.add_clause([1, 2, 3])
    assert s.solve() is True


def test_selected_core_is_reported():
    assert sat.CORE in ("compiled", "python")


class TestEnumerate:
    def test_empty_formula(self):
        assert sat_enumerate([], [1, 2]) == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_unit(self):
        assert sat_enumerate([(1,)], [1]) == {(1,)}

    def test_modes_agree(self):
        clauses = [(1, 2), (-1, 3), (-2, -3)]
        assert sat_enumerate(clauses, [1, 2, 3]) == sat_enumerate(clauses, [1, 2, 3],
                                                                   mode="exhaustive")

    def test_cap(self):
        with pytest.raises(CapExceeded):
            sat_enumerate([], list(range(1, 30)))


soft_st = st.lists(st.tuples(st.integers(1, 10).flatmap(lambda v: st.sampled_from([v, -v])),
                             st.integers(1, 20)), max_size=10)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(1, 10).flatmap(lambda v: st.sampled_from([v, -v])),
                         min_size=1, max_size=3), max_size=20), soft_st)
def test_internal_solver_is_optimal(hard, soft):
    inst = MaxSatInstance(10, hard, [((l,), w) for l, w in soft])
    best = brute_maxsat(inst)
    res = solve_internal(inst)
    if best is None:
        assert res.status == UNSATISFIABLE
    else:
        assert res.status == OPTIMUM
        assert inst.satisfies_hard(res.assignment)
        assert res.cost == best == inst.cost(res.assignment)


def test_internal_superincreasing_weights():
    inst = MaxSatInstance(4, [(1, 2)], [((1,), 1), ((2,), 2), ((-1,), 4), ((3,), 8)])
    res = solve_internal(inst)
    assert res.cost == brute_maxsat(inst)


def test_internal_no_soft():
    res = solve_internal(MaxSatInstance(2, [(1, 2)], []))
    assert res.status == OPTIMUM and res.cost == 0


def test_internal_unsat():
    assert solve_internal(MaxSatInstance(1, [(1,), (-1,)], [])).status == UNSATISFIABLE


class TestWcnf:
    def test_lines(self):
        text = write_wcnf(MaxSatInstance(3, [(1, -2)], [((3,), 4)]))
        lines = text.splitlines()
        assert "h 1 -2 0" in lines and "4 3 0" in lines

    def test_hard_only(self):
        text = write_wcnf(MaxSatInstance(2, [(1,), (-2,)], []))
        body = [l for l in text.splitlines() if not l.startswith("c")]
        assert all(l.startswith("h ") for l in body)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(clause_st, max_size=15), soft_st, st.booleans())
    def test_round_trip(self, hard, soft, legacy):
        inst = MaxSatInstance(12, hard, [((l,), w) for l, w in soft])
        back = parse_wcnf(write_wcnf(inst, legacy=legacy))
        assert (back.variable_count, back.hard, back.soft) == (inst.variable_count, inst.hard,
                                                               inst.soft)

    def test_deterministic(self):
        inst = MaxSatInstance(3, [(1, 2), (-3,)], [((1,), 2), ((2,), 1)])
        assert write_wcnf(inst) == write_wcnf(MaxSatInstance(3, list(inst.hard), list(inst.soft)))


# Transcripts in the two output dialects used by evaluation solvers.
LITERAL_TRANSCRIPT = """c solver 1.0
o 5
s OPTIMUM FOUND
v 1 -2 3
v -4 0
"""
BITSTRING_TRANSCRIPT = """c another solver
o 5
s OPTIMUM FOUND
v 1010
"""


class TestSolverOutput:
    def test_literal_dialect(self):
        r = parse_solver_output(LITERAL_TRANSCRIPT, 4)
        assert r.status == OPTIMUM and r.cost == 5
        assert r.assignment[1:] == [1, 0, 1, 0]

    def test_bitstring_dialect(self):
        r = parse_solver_output(BITSTRING_TRANSCRIPT, 4)
        assert r.assignment[1:] == [1, 0, 1, 0]

    def test_split_bitstring(self):
        assert parse_v_line(["1010"], 4)[1:] == [1, 0, 1, 0]

    def test_unsat(self):
        assert parse_solver_output("s UNSATISFIABLE\n", 3).status == UNSATISFIABLE

    def test_cost_without_model_is_unknown(self):
        r = parse_solver_output("o 3\ns OPTIMUM FOUND\n", 3)
        assert r.status == UNKNOWN

    def test_garbage(self):
        with pytest.raises(UnparsableOutput):
            parse_solver_output("hello\n", 3)

    def test_crash(self):
        with pytest.raises(SolverCrashed):
            parse_solver_output("", 3, returncode=139, stderr="segfault")


STUB = r'''
import itertools, sys
from opsat.backend.wcnf import parse_wcnf
inst = parse_wcnf(open(sys.argv[1]).read())
best = None
for bits in itertools.product((0, 1), repeat=inst.variable_count):
    a = [0, *bits]
    if inst.satisfies_hard(a) and (best is None or inst.cost(a) < best[0]):
        best = (inst.cost(a), a)
if best is None:
    print("s UNSATISFIABLE")
else:
    print(f"o {best[0]}")
    print("s OPTIMUM FOUND")
    print("v " + "".join(str(b) for b in best[1][1:]))
'''


@pytest.fixture(params=["stub", "rc2"])
def solver_command(request, tmp_path):
    if request.param == "rc2":
        pytest.importorskip("pysat")
        return bundled_rc2_command()
    script = tmp_path / "stub_solver.py"
    script.write_text(STUB)
    return [sys.executable, str(script)]


def test_external_forced(solver_command):
    r = run_external(MaxSatInstance(1, [(1,)], [((-1,), 5)]), solver_command, 60)
    assert r.status == OPTIMUM and r.cost == 5 and r.assignment[1] == 1


def test_external_unsat(solver_command):
    r = run_external(MaxSatInstance(1, [(1,), (-1,)], []), solver_command, 60)
    assert r.status == UNSATISFIABLE


def test_external_agrees_with_internal(solver_command):
    inst = MaxSatInstance(6, [(1, 2, 3), (-1, -2), (4, -5), (-3, 6)],
                          [((1,), 3), ((2,), 5), ((-4,), 2), ((5,), 7), ((-6,), 1)])
    assert run_external(inst, solver_command, 60).cost == solve_internal(inst).cost


def test_missing_binary():
    with pytest.raises(SolverCrashed):
        run_external(MaxSatInstance(1, [(1,)], []), ["/nonexistent/solver"], 5)
