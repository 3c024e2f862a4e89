from __future__ import annotations

from fractions import Fraction

import pytest

from opsat.errors import EvalDivisionByZero, MissingValue
from opsat.evaluator import brute_force_optimum, check_feasibility, evaluate_numeric
from opsat.grounder.nodes import GConst, GFloor, GMax, GPower, GProduct, GScale, GSum, GVar
from opsat.grounder.ground import simplify_expr
from opsat.parser.parser import parse_expression

from conftest import data_text, ground, wrap

x1, x2 = GVar("x", (1,)), GVar("x", (2,))


class TestEvaluateNumeric:
    def test_weighted_sum(self):
        e = GSum((GScale(Fraction(3), x1), GScale(Fraction(4), x2)))
        assert evaluate_numeric(e, {x1: 0, x2: 1}) == 4

    def test_floor_of_negative(self):
        assert evaluate_numeric(GFloor(GConst(Fraction(-5, 4))), {}) == -2

    def test_cvrp_max_term_at_zero(self):
        bound = {"i": 2, "j": 3}
        e = simplify_expr(parse_expression(r"Q \max_{k=1}^m \{ x_{i,j,k} \}"), {"Q": 5, "m": 2},
                          bound)
        values = {GVar("x", (2, 3, k)): 0 for k in (1, 2)}
        assert evaluate_numeric(e, values) == 0

    def test_lookup_by_name(self):
        assert evaluate_numeric(GMax((x1, x2)), {"x_{1}": 2, "x_{2}": 5}) == 5

    def test_exact_rationals(self):
        e = GProduct((GConst(Fraction(1, 3)), GConst(Fraction(3, 7))))
        assert evaluate_numeric(e, {}) == Fraction(1, 7)

    def test_missing_value(self):
        with pytest.raises(MissingValue):
            evaluate_numeric(x1, {})

    def test_zero_to_negative_power(self):
        with pytest.raises(EvalDivisionByZero):
            evaluate_numeric(GPower(x1, -1), {x1: 0})


def mknap_optimum():
    return {GVar("x", (i,)): v for i, v in enumerate((0, 1, 1, 0, 0, 1), 1)}


class TestFeasibility:
    def test_mknap_optimum(self):
        gm = ground("mkp", data_text("mknap1-1"))
        rep = check_feasibility(gm, mknap_optimum())
        assert rep.feasible and rep.objective == 3800

    def test_knapsack_over_capacity(self):
        gm = ground("mkp", data_text("knapsack_tiny"))
        rep = check_feasibility(gm, {x1: 1, x2: 1})
        assert not rep.feasible and rep.objective == 7
        (bad,) = rep.violated
        assert bad.lhs == 2 and bad.rhs == 1

    def test_no_constraints(self):
        gm = ground(wrap(r"\min && 3"))
        assert check_feasibility(gm, {}).feasible

    def test_domain_violation(self):
        gm = ground("mkp", data_text("knapsack_tiny"))
        assert not check_feasibility(gm, {x1: 2, x2: 0}).feasible

    def test_feasible_is_conjunction(self):
        gm = ground("mkp", data_text("mknap1-1"))
        vals = mknap_optimum()
        vals[GVar("x", (4,))] = 1
        rep = check_feasibility(gm, vals)
        assert rep.feasible == all(v.satisfied for v in rep.verdicts) is False


class TestBruteForce:
    def test_knapsack(self):
        r = brute_force_optimum(ground("mkp", data_text("knapsack_tiny")))
        assert r.feasible and r.value == 4 and r.values == {x1: 0, x2: 1}
        assert r.points == 4

    def test_triangle_coloring(self):
        r = brute_force_optimum(ground("gcp", data_text("triangle")))
        assert r.value == 3 and r.points == 27

    def test_infeasible(self):
        r = brute_force_optimum(ground(wrap(r"\min && x", r"s.t. && x \in \{0,1\}", r"&& x = 2")))
        assert not r.feasible

    def test_real_grid(self):
        from opsat.codec import BitWidth
        gm = ground("sphere", data_text("sphere_d1"))
        r = brute_force_optimum(gm, BitWidth(7, 1))
        assert r.value == -450


def test_negative_only_integer_range():
    gm = ground(wrap(r"\max && x", r"s.t. && x \in \{-3, \dots, -2\}"))
    r = brute_force_optimum(gm)
    assert r.value == -2 and r.points == 2
