from __future__ import annotations

import random
from fractions import Fraction

import pytest

from opsat.bench import DESK_SUITE, read_suite
from opsat.codec import BitWidth
from opsat.errors import (
    ExpansionLimitExceeded,
    GroundingError,
    NonIntegerRangeEndpoint,
    UndeclaredDomain,
    UnsupportedDomainShape,
)
from opsat.evaluator import candidate_values, check_feasibility
from opsat.grounder.ground import (
    ExpansionLimits,
    classify_domain,
    ground_model,
    simplify_expr,
)
from opsat.grounder.nodes import (
    DomainConstraint,
    Enumeration,
    GConst,
    GMax,
    GVar,
    IntegerRange,
    RealRange,
    RelationConstraint,
)
from opsat.grounder.printer import fmt_number, model_to_latex
from opsat.parser.parser import parse_expression, parse_model

from conftest import data_text, ground, wrap

DESK = read_suite(DESK_SUITE)


def shape(gm):
    return (gm.direction, gm.objective, list(gm.constraints),
            sorted(v.name for v in gm.variables), len(gm.contradictions))


class TestCvrpExample:
    gm = ground("cvrp", data_text("cvrp3"))

    def test_decision_variables(self):
        names = {v.name for v in self.gm.variables}
        xs = {f"x_{{{i},{j},{k}}}" for i in (1, 2, 3) for j in (1, 2, 3) for k in (1, 2) if i != j}
        assert names == xs | {"u_{2}", "u_{3}"}

    def test_diagonal_equalities_become_assignments(self):
        assert not any(v.index[0] == v.index[1] for v in self.gm.variables if v.base == "x")

    def test_depot_row_has_one_copy_per_vehicle(self):
        rows = [c for c in self.gm.constraints if c.origin.startswith("line 7 ")]
        assert len(rows) == 2

    def test_constraint_count(self):
        # 12 binary domains, 2 load domains, 6 flow, 2 visit, 2 depot, 2 capacity, 2 MTZ
        assert len(self.gm.constraints) == 28

    def test_set_defined_variant_agrees(self):
        other = ground("cvrp_sets", data_text("cvrp3"))
        assert {v.name for v in other.variables} == {v.name for v in self.gm.variables}
        assert len(other.constraints) == len(self.gm.constraints)


def test_minimal_model():
    gm = ground(wrap(r"\min && x", r"s.t. && x \in \{0,1\}"))
    assert gm.variables == [GVar("x")]
    (c,) = gm.constraints
    assert c.domain == Enumeration((GConst(Fraction(0)), GConst(Fraction(1))))


def test_mkp_row_counts():
    gm = ground("mkp", data_text("mknap1-1"))
    assert len(gm.variables) == 6
    rel = [c for c in gm.constraints if isinstance(c, RelationConstraint)]
    assert len(rel) == 10


class TestSimplify:
    def test_constant_sum(self):
        assert simplify_expr(parse_expression(r"\sum_{i=1}^{3} i")) == GConst(Fraction(6))

    def test_max_under_bound_indices(self):
        e = simplify_expr(parse_expression(r"\max_{k=1}^{2} \{x_{i,j,k}\}"), {}, {"i": 2, "j": 3})
        assert e == GMax((GVar("x", (2, 3, 1)), GVar("x", (2, 3, 2))))

    def test_constant_indicator(self):
        assert simplify_expr(parse_expression(r"\mathbb{I}(2 \le 3)")) == GConst(Fraction(1))

    def test_neutral_elements(self):
        assert simplify_expr(parse_expression("1 x + 0")) == GVar("x")
        assert simplify_expr(parse_expression("x^1")) == GVar("x")

    def test_known_binding(self):
        e = simplify_expr(parse_expression("2 d + 1"), {"d": 3})
        assert e == GConst(Fraction(7))

    def test_cardinality_of_known_set(self):
        e = simplify_expr(parse_expression("|S|"), {"S": {1, 2, 5}})
        assert e == GConst(Fraction(3))

    def test_filtered_binder(self):
        e = simplify_expr(parse_expression(r"\sum_{i=1, i \neq 2}^{4} i"))
        assert e == GConst(Fraction(8))


class TestClassifyDomain:
    def test_enumeration(self):
        d = Enumeration((GConst(Fraction(0)), GConst(Fraction(1))))
        assert classify_domain(d) == d

    def test_integer_range_from_set(self):
        gm = ground(wrap(r"\min && u", r"s.t. && u \in \{2, \dots, n\}"), "n = 7")
        assert classify_domain(*gm.domains_of(GVar("u"))) == IntegerRange(2, 7)

    def test_real_chain(self):
        gm = ground(wrap(r"\min && x", r"s.t. && x \in \mathbb{R}", r"&& -100 \le x \le 100"))
        assert classify_domain(*gm.domains_of(GVar("x"))) == \
            RealRange(Fraction(-100), Fraction(100))

    def test_integer_intersection(self):
        assert classify_domain(IntegerRange(0, None), RealRange(Fraction(-3), Fraction(5, 2))) == \
            IntegerRange(0, 2)

    def test_two_enumerations_do_not_combine(self):
        a = Enumeration((GConst(Fraction(0)),))
        with pytest.raises(UnsupportedDomainShape):
            classify_domain(a, a)


class TestErrors:
    def test_missing_domain_in_strict_mode(self):
        with pytest.raises(UndeclaredDomain):
            ground(wrap(r"\min && x + y", r"s.t. && x \in \{0,1\}"), strict=True)

    def test_free_variable_allowed_by_default(self):
        gm = ground(wrap(r"\min && x + y", r"s.t. && x \in \{0,1\}", r"&& y = x"))
        assert dict(gm.decision_vars)[GVar("y")] == "free"

    def test_fractional_range_endpoint(self):
        with pytest.raises(NonIntegerRangeEndpoint):
            ground(wrap(r"\min && x", r"s.t. && x \in \{1, \dots, n\}"), "n = 2.5")

    def test_expansion_cap(self):
        model = parse_model(wrap(r"\min && x_1", r"s.t. && x_i \in \{0,1\} && i=1,\dots,n"))
        from opsat.parser.parser import parse_instance_data
        with pytest.raises(ExpansionLimitExceeded):
            ground_model(model, parse_instance_data("n = 50"), ExpansionLimits(max_constraints=10))

    def test_unresolved_quantifier(self):
        with pytest.raises(GroundingError):
            ground(wrap(r"\min && x_1", r"s.t. && x_i \in \{0,1\} && i=1,\dots,n"))

    def test_contradiction_is_recorded(self):
        gm = ground(wrap(r"\min && x", r"s.t. && x \in \{0,1\}", r"&& x = 2"))
        assert gm.contradictions


@pytest.mark.parametrize("entry", DESK, ids=lambda e: e.name + ":" + e.model.stem)
def test_grounding_is_a_fixpoint(entry):
    gm = ground(entry.model.stem, entry.data.read_text())
    again = ground(model_to_latex(gm))
    assert shape(again) == shape(gm)


INTEGER_ROWS = [e for e in DESK if e.problem in ("mkp", "gcp", "tsp", "cvrp", "jsp", "osp", "qap")
                and e.name in ("knapsack_tiny", "triangle", "tsp4", "cvrp3", "jsp2x2", "osp2x2",
                               "qap3")]


@pytest.mark.parametrize("entry", INTEGER_ROWS, ids=lambda e: e.name + ":" + e.model.stem)
def test_grounding_preserves_semantics(entry):
    """Feasibility/objective agree between the ground model and re-grounding with values as data."""
    data = entry.data.read_text()
    gm = ground(entry.model.stem, data)
    rng = random.Random(entry.name)
    width = BitWidth(entry.n, entry.m)
    choices = {v: candidate_values(gm, v, width, 1000) for v in gm.variables}
    for _ in range(25):
        values = {v: rng.choice(vals) for v, vals in choices.items()}
        report = check_feasibility(gm, values)
        extra = "\n".join(f"{v.name} = {fmt_number(q)}" for v, q in values.items())
        fixed = ground(entry.model.stem, data + "\n" + extra)
        assert not fixed.variables
        assert (not fixed.contradictions) == report.feasible
        assert fixed.objective == GConst(report.objective)


def test_domain_constraints_target_variables():
    for entry in DESK:
        gm = ground(entry.model.stem, entry.data.read_text())
        declared = {c.target for c in gm.constraints if isinstance(c, DomainConstraint)}
        kinds = dict(gm.decision_vars)
        for v in gm.variables:
            assert v in declared or kinds[v] in ("free", "aux")
