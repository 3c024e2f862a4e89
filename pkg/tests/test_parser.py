from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opsat.errors import (
    DuplicateAssignment,
    MissingObjective,
    ParseError,
    UnknownCommand,
)
from opsat.parser import ast as A
from opsat.parser.lexer import COMMAND, tokenize
from opsat.parser.parser import (
    parse_expression,
    parse_instance_data,
    parse_model,
    parse_relation,
)
from opsat.parser.printer import to_latex

from conftest import ALL_MODELS, model_text, wrap


def kinds(src):
    return [(t.kind, t.lexeme) for t in tokenize(src)][:-1]


class TestLexer:
    def test_subscripted_relation(self):
        assert kinds(r"x_1 \le 3") == [
            ("letter", "x"), ("punct", "_"), ("digits", "1"), ("command", "\\le"), ("digits", "3"),
        ]

    def test_sum_starts_with_command(self):
        toks = tokenize(r"\sum_{i=1}^n v_i x_i")
        assert toks[0].kind == COMMAND and toks[0].lexeme == "\\sum"

    def test_unknown_command_position(self):
        with pytest.raises(UnknownCommand) as exc:
            tokenize(r"\foo")
        assert exc.value.span[:2] == (1, 1)

    def test_blackboard_letter_is_one_command(self):
        toks = tokenize(r"x \in \mathbb{R}")
        assert [t.lexeme for t in toks if t.kind == COMMAND] == ["\\in", "\\mathbb{R}"]

    def test_comments_are_skipped(self):
        assert kinds("x % trailing note\n") == [("letter", "x")]

    def test_every_command_starts_with_backslash(self):
        for name in ALL_MODELS:
            for t in tokenize(model_text(name)):
                if t.kind == COMMAND:
                    assert t.lexeme.startswith("\\")


class TestModelParser:
    def test_mkp_schemas(self):
        m = parse_model(model_text("mkp"))
        assert m.objective.direction == "max"
        assert len(m.constraints) == 2

    def test_minimal_model(self):
        m = parse_model(r"\begin{align}\min && x \\ s.t. && x \in \{0,1\}\end{align}")
        assert m.objective.direction == "min"
        assert m.objective.expr == A.VarRef("x")
        (c,) = m.constraints
        assert c.relation.ops == (A.IN,)
        assert isinstance(c.relation.operands[1], A.SetLiteral)

    def test_cvrp_with_set_definitions(self):
        m = parse_model(model_text("cvrp_sets"))
        assert len(m.constraints) == 11
        max_terms = [c for c in m.constraints if "\\max" in to_latex(c.relation)]
        assert len(max_terms) == 1

    @pytest.mark.parametrize("name", ALL_MODELS)
    def test_every_shipped_model_parses(self, name):
        m = parse_model(model_text(name))
        assert m.objective.direction in ("min", "max")

    @pytest.mark.parametrize("name", ALL_MODELS)
    def test_print_parse_print_fixpoint(self, name):
        once = to_latex(parse_model(model_text(name)))
        twice = to_latex(parse_model(once))
        assert once == twice

    def test_missing_objective(self):
        with pytest.raises(MissingObjective):
            parse_model(r"\begin{align} x \le 3 \end{align}")

    def test_decimal_is_exact(self):
        e = parse_expression("0.1")
        assert e.value == Fraction(1, 10)

    def test_single_token_subscript_normalizes(self):
        assert parse_expression("x_i") == parse_expression("x_{i}")

    def test_implicit_product_is_left_associative(self):
        e = parse_expression("2 x y + 1")
        assert isinstance(e, A.Terms)
        first = e.terms[0]
        assert isinstance(first, A.Factors) and len(first.factors) == 3

    def test_chained_relation_kept_as_chain(self):
        r = parse_relation(r"-100 \le x \le 100")
        assert len(r.operands) == 3

    def test_error_carries_span(self):
        with pytest.raises(ParseError) as exc:
            parse_model(wrap(r"\min && x +", r"&& x \in \{0,1\}"))
        assert exc.value.span is not None


class TestInstanceData:
    def test_three_assignments(self):
        out = parse_instance_data("m = 5\nn = 20\nd_{1,2} = 3")
        assert [to_latex(a.target) for a in out] == ["m", "n", "d_{1, 2}"]

    def test_empty(self):
        assert parse_instance_data("") == []

    def test_duplicate(self):
        with pytest.raises(DuplicateAssignment):
            parse_instance_data("n = 3\nn = 4")

    def test_set_value(self):
        (a,) = parse_instance_data(r"S = \{1, 2, 3\}")
        assert isinstance(a.value, A.SetLiteral)


ALPHABET = [r"\sum", r"\max", r"\in", r"\le", "=", "_", "^", "{", "}", "(", ")", "x", "i", "1",
            "2", "+", "-", r"\\", "&&", r"\{", r"\}", ",", r"\dots", r"\min", r"\frac", "|",
            r"\begin{align}", r"\end{align}", "s.t."]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(ALPHABET), max_size=30))
def test_parser_is_total(words):
    src = " ".join(words)
    try:
        m = parse_model(src)
    except ParseError as e:
        assert e.span is not None
    else:
        assert isinstance(m, A.Model)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=40))
def test_lexer_is_total(src):
    try:
        tokenize(src)
    except ParseError as e:
        assert e.span is not None
