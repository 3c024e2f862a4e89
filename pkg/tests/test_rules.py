"""Rule emitters against arithmetic computed directly in the tests."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from opsat.backend.enumerate import sat_enumerate
from opsat.codec import BitWidth, encode_constant, word_pattern_value
from opsat.encoder import rules
from opsat.encoder.conformance import check_counts, check_semantics, measure, semantic_cases
from opsat.encoder.counts import CLOSED_FORMS
from opsat.encoder.emitter import (
    ALL_FIXES,
    CORRECTED,
    FIX_MULTIPLIER_LSB,
    FIX_MULTIPLIER_OVERFLOW,
    PUBLISHED,
    Emitter,
)


def clauses_of(em: Emitter):
    return em.finish()


def reachable(em: Emitter, words):
    """Set of value tuples of ``words`` over all satisfying assignments."""
    var_ids = []
    for w in words:
        var_ids.extend(b for b in w.bits if not isinstance(b, bool))
    interest = sorted(set(var_ids))
    sols = sat_enumerate(clauses_of(em), interest, cap=40, nvars=em.registry.variable_count)
    out = set()
    for bits in sols:
        val = dict(zip(interest, bits))
        row = []
        for w in words:
            pat = [b if isinstance(b, bool) else val[b] for b in w.bits]
            row.append(word_pattern_value([int(p) for p in pat], w.width))
        out.add(tuple(row))
    return out


def binary_op(fn, w, fixes=CORRECTED):
    em = Emitter(fixes=fixes)
    a, b, c = em.fresh_word(w), em.fresh_word(w), em.fresh_word(w)
    fn(em, a, b, c)
    return reachable(em, [a, b, c])


def unary_op(fn, w, fixes=CORRECTED):
    em = Emitter(fixes=fixes)
    a, c = em.fresh_word(w), em.fresh_word(w)
    fn(em, a, c)
    return reachable(em, [a, c])


def relation(fn, w, fixes=CORRECTED):
    em = Emitter(fixes=fixes)
    a, b = em.fresh_word(w), em.fresh_word(w)
    fn(em, a, b)
    return {(x, y) for x, y in reachable(em, [a, b])}


def grid_pairs(w):
    g = w.grid()
    return [(x, y) for x in g for y in g]


def test_full_adder_truth_table():
    em = Emitter()
    pins = em.fresh_many(5)
    rules.full_adder(em, *pins)
    rows = sat_enumerate(em.finish(), pins)
    expected = {(x, y, c, (x + y + c) % 2, (x + y + c) // 2)
                for x, y, c in itertools.product((0, 1), repeat=3)}
    assert rows == expected


def test_half_adder_truth_table():
    em = Emitter()
    pins = em.fresh_many(4)
    rules.half_adder(em, *pins)
    rows = sat_enumerate(em.finish(), pins)
    assert rows == {(x, y, x ^ y, x & y) for x, y in itertools.product((0, 1), repeat=2)}


def test_complement_counts():
    assert measure("Complement", 2, 1) == (4, 29)


@pytest.mark.parametrize("rule", ["Equal", "NotEqual", "Complement", "Normalization",
                                  "FullAdder", "HalfAdder", "Absolute", "Floor", "Ceil",
                                  "LessEqual"])
def test_closed_forms_that_hold(rule):
    for n, m in itertools.product((1, 2, 3), (0, 1, 2)):
        assert measure(rule, n, m) == CLOSED_FORMS[rule](n, m)


def test_adder_differs_from_published_aux_count_by_one_carry():
    for n, m in itertools.product((1, 2, 3), (0, 1, 2)):
        aux, cls = measure("Adder", n, m)
        pa, pc = CLOSED_FORMS["Adder"](n, m)
        assert cls == pc and aux == pa + 1


def twos(bits, m):
    """Two's-complement value of an LSB-first 0/1 pattern with ``m`` fractional bits."""
    top = len(bits) - 1
    k = sum(b << i for i, b in enumerate(bits[:-1])) - (bits[-1] << top)
    return Fraction(k, 2 ** m)


@pytest.mark.parametrize("w", [BitWidth(2, 0), BitWidth(1, 1)], ids=str)
def test_adder_is_twos_complement_addition(w):
    em = Emitter()
    a, b, c = (em.fresh_word(w) for _ in range(3))
    rules.adder(em, a, b, c)
    pins = list(a.bits) + list(b.bits) + list(c.bits)
    k = w.size
    got = {tuple(twos(s[i:i + k], w.m) for i in (0, k, 2 * k))
           for s in sat_enumerate(em.finish(), pins)}
    vals = [twos(p, w.m) for p in itertools.product((0, 1), repeat=k)]
    lo, hi = min(vals), max(vals)
    assert got == {(x, y, x + y) for x in vals for y in vals if lo <= x + y <= hi}


def test_equal_includes_signed_zeros():
    w = BitWidth(2, 1)
    em = Emitter()
    a, b = em.fresh_word(w), em.fresh_word(w)
    rules.equal(em, a, b)
    sols = sat_enumerate(em.finish(), list(a.bits) + list(b.bits))
    values = {(word_pattern_value(s[:4], w), word_pattern_value(s[4:], w)) for s in sols}
    assert values == {(x, x) for x in w.grid()}
    zero_pairs = {(s[3], s[7]) for s in sols if not any(s[:3]) and not any(s[4:7])}
    assert zero_pairs == {(0, 0), (0, 1), (1, 0), (1, 1)}


@pytest.mark.parametrize("fn, op", [
    (rules.not_equal, lambda x, y: x != y),
    (rules.less_than, lambda x, y: x < y),
    (rules.less_equal, lambda x, y: x <= y),
], ids=["ne", "lt", "le"])
@pytest.mark.parametrize("w", [BitWidth(2, 0), BitWidth(2, 1), BitWidth(1, 2)], ids=str)
def test_relations(fn, op, w):
    assert relation(fn, w) == {(x, y) for x, y in grid_pairs(w) if op(x, y)}


def test_less_equal_reflexive():
    w = BitWidth(2, 1)
    em = Emitter()
    a = em.fresh_word(w)
    rules.less_equal(em, a, a)
    assert len(sat_enumerate(em.finish(), list(a.bits))) == 2 ** w.size


def test_published_less_than_drops_opposite_sign_pairs():
    w = BitWidth(2, 0)
    got = relation(rules.less_than, w, PUBLISHED)
    assert (Fraction(-2), Fraction(2)) not in got


def test_floor_and_ceil_exhaustive():
    w = BitWidth(2, 2)
    f = unary_op(rules.floor_rule, w)
    c = unary_op(rules.ceil_rule, w)
    assert f == {(x, Fraction(math.floor(x))) for x in w.grid() if abs(math.floor(x)) <= w.max_value}
    assert c == {(x, Fraction(math.ceil(x))) for x in w.grid() if abs(math.ceil(x)) <= w.max_value}
    assert (Fraction(-5, 4), Fraction(-2)) in f


def test_absolute():
    w = BitWidth(2, 1)
    assert unary_op(rules.absolute, w) == {(x, abs(x)) for x in w.grid()}


def test_square_overflows_above_one():
    w = BitWidth(2, 0)
    em = Emitter()
    a, c = em.fresh_word(w), em.fresh_word(w)
    rules.power(em, a, 2, c)
    assert reachable(em, [a, c]) == {(x, x * x) for x in w.grid() if abs(x) <= 1}


def test_multiplier_exact_products():
    w = BitWidth(2, 1)
    got = binary_op(rules.multiplier, w)
    exact = {(x, y, x * y) for x, y in grid_pairs(w) if w.representable(x * y)}
    assert exact <= got
    for x, y, z in got:
        assert abs(x * y - z) < w.resolution  # truncation keeps the error below one step


@pytest.mark.parametrize("w", [BitWidth(3, 0), BitWidth(3, 1), BitWidth(3, 2)], ids=str)
def test_multiplier_overflow_fix_is_needed_at_three_integer_bits(w):
    published = check_semantics("Multiplier", w.n, w.m, fixes=PUBLISHED)
    no_overflow_fix = check_semantics("Multiplier", w.n, w.m,
                                      fixes=ALL_FIXES - {FIX_MULTIPLIER_OVERFLOW})
    assert not published.ok
    assert not no_overflow_fix.ok
    if w.m > 0:
        assert check_semantics("Multiplier", w.n, w.m,
                               fixes=ALL_FIXES - {FIX_MULTIPLIER_LSB}).ok
    assert check_semantics("Multiplier", w.n, w.m, fixes=CORRECTED).ok


def test_max_is_an_upper_bound_attained():
    w = BitWidth(1, 1)
    em = Emitter()
    ops = [em.fresh_word(w) for _ in range(3)]
    c = em.fresh_word(w)
    rules.max_rule(em, ops, c)
    rows = reachable(em, ops + [c])
    expected = {(x, y, z, max(x, y, z)) for x in w.grid() for y in w.grid() for z in w.grid()}
    assert rows == expected


def test_sum_of_constants():
    w = BitWidth(2, 1)
    em = Emitter()
    c = em.fresh_word(w)
    rules.sum_rule(em, [encode_constant(Fraction(3, 2), w), encode_constant(1, w)], c)
    assert reachable(em, [c]) == {(Fraction(5, 2),)}


def test_integer_domain_zero_one():
    w = BitWidth(2, 1)
    em = Emitter()
    a = em.fresh_word(w)
    rules.integer_domain(em, a, 0, 1)
    sols = sat_enumerate(em.finish(), list(a.bits))
    assert {word_pattern_value(s, w) for s in sols} == {0, 1}
    assert all(s[0] == 0 for s in sols)


def test_enumeration_domain():
    w = BitWidth(3, 0)
    em = Emitter()
    a = em.fresh_word(w)
    rules.enumeration_domain(em, a, [encode_constant(2, w), encode_constant(5, w)])
    assert reachable(em, [a]) == {(Fraction(2),), (Fraction(5),)}


def test_normalization_offsets_by_full_range():
    w = BitWidth(2, 0)
    em = Emitter()
    a, c = em.fresh_word(w), em.fresh_word(w)
    rules.normalization(em, a, c)
    sols = sat_enumerate(em.finish(), list(a.bits) + list(c.bits))
    pairs = {(word_pattern_value(s[:3], w), sum(b << i for i, b in enumerate(s[3:]))) for s in sols}
    assert pairs == {(x, int(x) + 4) for x in w.grid()}


def test_shared_variable_transitivity():
    w = BitWidth(2, 0)
    em = Emitter()
    a, b, c = (em.fresh_word(w) for _ in range(3))
    rules.equal(em, a, b)
    rules.equal(em, b, c)
    rows = reachable(em, [a, c])
    assert all(x == z for x, z in rows)


def test_raw_count_ignores_constant_simplification():
    w = BitWidth(2, 1)
    em = Emitter()
    a = em.fresh_word(w)
    with em.measure("Equal"):
        rules.equal(em, a, encode_constant(1, w))
    assert em.rule_stats["Equal"].clauses == CLOSED_FORMS["Equal"](2, 1)[1]
    assert len(em.finish()) < em.rule_stats["Equal"].clauses


def test_all_corrected_semantics_pass():
    failing = [case for case in semantic_cases()
               if not check_semantics(*case, fixes=CORRECTED).ok]
    assert failing == []


def test_count_report_covers_the_grid():
    results = check_counts()
    rules_seen = {r.case.rule for r in results}
    assert rules_seen == set(CLOSED_FORMS)
    assert {(r.case.n, r.case.m) for r in results} == set(
        itertools.product((1, 2, 3), (0, 1, 2)))
