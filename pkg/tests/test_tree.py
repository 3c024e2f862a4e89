from __future__ import annotations

from fractions import Fraction

import pytest

from opsat.backend.enumerate import sat_enumerate
from opsat.backend.internal import solve_internal
from opsat.backend.wcnf import write_wcnf
from opsat.codec import NEAREST, BitWidth, decode_word, word_pattern_value
from opsat.encoder.tree import reduce_model, stored_model
from opsat.errors import ConstantOverflow, InexactConstant
from opsat.evaluator import decode_solution

from conftest import data_text, ground, wrap


def rules_used(red):
    return {k[5:]: v for k, v in red.stats.items() if k.startswith("rule.")}


def test_sum_feeds_equal():
    gm = ground(wrap(r"\min && x_1", r"s.t. && \sum_{i=1}^{5} x_i = 1",
                     r"&& x_i \in \{0,1\} && i=1,\dots,5"))
    used = rules_used(reduce_model(gm, BitWidth(4, 0)))
    assert used["Sum"] == 1 and used["Equal"] == 1


def test_mkp_objective_is_a_sum_of_scales():
    gm = ground("mkp", data_text("mknap1-1"))
    assert type(gm.objective).__name__ == "GSum"
    assert [type(a).__name__ for a in gm.objective.args] == ["GScale"] * 6


def test_same_leaf_same_word():
    gm = ground(wrap(r"\min && x", r"s.t. && x = x", r"&& x \in \{0,1,2\}"))
    red = reduce_model(gm, BitWidth(3, 0))
    (word,) = red.words.values()
    sols = sat_enumerate(red.instance.hard, list(word.bits))
    assert {word_pattern_value(s, word.width) for s in sols} == {0, 1, 2}


def test_soft_clauses_are_weighted_units():
    gm = ground("mkp", data_text("knapsack_tiny"))
    red = reduce_model(gm, BitWidth(4, 0))
    assert [w for _, w in red.instance.soft] == [1, 2, 4, 8, 16]
    assert all(len(c) == 1 for c, _ in red.instance.soft)


@pytest.mark.parametrize("direction", ["max", "min"])
def test_normalized_objective_is_monotone(direction):
    gm = ground(wrap(rf"\{direction} && u", r"s.t. && u \in \mathbb{Z}"))
    red = reduce_model(gm, BitWidth(2, 0))
    u = red.words[gm.variables[0]]
    mu_hat = red.objective.mu_hat
    sols = sat_enumerate(red.instance.hard, list(u.bits) + list(mu_hat.bits))
    k = u.width.size
    rows = {(word_pattern_value(s[:k], u.width), sum(b << i for i, b in enumerate(s[k:])))
            for s in sols}
    sign = 1 if direction == "max" else -1
    assert {v for v, _ in rows} == set(range(-3, 4))
    assert all(total == sign * v + 4 for v, total in rows)


def test_width_monotonicity():
    gm = ground("sphere", data_text("sphere_d1"))
    small = reduce_model(gm, BitWidth(10, 2))
    large = reduce_model(gm, BitWidth(10, 4))
    assert large.instance.variable_count > small.instance.variable_count


def test_reduction_is_deterministic():
    gm = ground("cvrp", data_text("cvrp3"))
    a = write_wcnf(reduce_model(gm, BitWidth(5, 0)).instance)
    b = write_wcnf(reduce_model(ground("cvrp", data_text("cvrp3")), BitWidth(5, 0)).instance)
    assert a == b


def test_shift_scale_is_equivalent_and_smaller():
    gm = ground(wrap(r"\min && 4 x + 2 y", r"s.t. && x + y \ge 1", r"&& x \in \{0,1,2\}",
                     r"&& y \in \{0,1,2\}"))
    w = BitWidth(4, 0)
    plain = reduce_model(gm, w)
    shifted = reduce_model(gm, w, shift_scale=True)
    assert shifted.instance.variable_count < plain.instance.variable_count
    for red in (plain, shifted):
        res = solve_internal(red.instance)
        d = decode_solution(red, res.assignment, gm)
        assert d.report.feasible and d.report.objective == 2


def test_inexact_constant_rejected():
    gm = ground(wrap(r"\min && x + 0.1", r"s.t. && x \in \{0,1\}"))
    with pytest.raises(InexactConstant):
        reduce_model(gm, BitWidth(3, 2))


def test_nearest_records_precision():
    gm = ground("sphere", data_text("sphere_d1_o03"))
    w = BitWidth(10, 2)
    red = reduce_model(gm, w, NEAREST)
    assert [(p.value, p.stored) for p in red.precision] == [(Fraction(-3, 10), Fraction(-1, 4))]  # x - o
    stored = stored_model(gm, w, NEAREST)
    res = solve_internal(red.instance)
    d = decode_solution(red, res.assignment, stored)
    assert d.report.feasible
    (x,) = [v for v in gm.variables if v.base == "x"]
    assert d.values[x] == Fraction(1, 4)


def test_constant_overflow():
    gm = ground(wrap(r"\min && x + 100", r"s.t. && x \in \{0,1\}"))
    with pytest.raises(ConstantOverflow):
        reduce_model(gm, BitWidth(3, 0))


def test_objective_word_decodes_to_objective():
    gm = ground("qap", data_text("qap3"))
    red = reduce_model(gm, BitWidth(7, 0))
    res = solve_internal(red.instance)
    assert decode_word(red.objective.u, res.assignment) == 38
