from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opsat.codec import (
    NEAREST,
    BitRegistry,
    BitWidth,
    alloc_word,
    decode_word,
    encode_constant,
    quantize,
    read_varmap,
    write_varmap,
)
from opsat.errors import ConstantOverflow, InexactConstant

WIDTHS = [BitWidth(n, m) for n in (1, 2, 3) for m in (0, 1, 2)]


def const_value(word):
    return decode_word(word, {})


class TestAlloc:
    def test_first_word(self):
        w = alloc_word(BitRegistry(), BitWidth(2, 1))
        assert w.bits == (1, 2, 3, 4)

    def test_fresh_words_are_disjoint(self):
        reg = BitRegistry()
        a = alloc_word(reg, BitWidth(2, 1))
        b = alloc_word(reg, BitWidth(2, 1))
        assert not set(a.bits) & set(b.bits)
        assert reg.variable_count == 8

    def test_smallest_word(self):
        assert len(alloc_word(BitRegistry(), BitWidth(1, 0))) == 2

    def test_invalid_width(self):
        with pytest.raises(ValueError):
            BitWidth(0, 1)


class TestConstants:
    def test_two_and_a_half(self):
        w = encode_constant(Fraction(5, 2), BitWidth(2, 1))
        assert w.bits == (True, False, True, False)
        assert const_value(w) == Fraction(5, 2)

    def test_nearest_tenth(self):
        assert quantize(Fraction(1, 10), BitWidth(2, 4), NEAREST) == Fraction(2, 16)

    def test_reject_inexact(self):
        with pytest.raises(InexactConstant):
            encode_constant(Fraction(1, 10), BitWidth(2, 4))

    def test_overflow(self):
        with pytest.raises(ConstantOverflow):
            encode_constant(5, BitWidth(2, 1))

    def test_overflow_bound_is_tight(self):
        w = BitWidth(2, 1)
        assert const_value(encode_constant(w.max_value, w)) == w.max_value
        with pytest.raises(ConstantOverflow):
            encode_constant(w.max_value + w.resolution, w)

    def test_zero_has_positive_sign(self):
        for w in WIDTHS:
            assert encode_constant(0, w).sign is False

    def test_precision_note(self):
        reg = BitRegistry()
        encode_constant(Fraction(3, 10), BitWidth(2, 2), NEAREST, reg)
        (note,) = reg.precision
        assert note.stored == Fraction(1, 4) and note.error == Fraction(1, 20)

    @pytest.mark.parametrize("w", WIDTHS, ids=str)
    def test_round_trip_exhaustive(self, w):
        for v in w.grid():
            assert const_value(encode_constant(v, w)) == v


class TestDecode:
    w = BitWidth(2, 1)

    def test_all_zero(self):
        word = alloc_word(BitRegistry(), self.w)
        assert decode_word(word, {1: 0, 2: 0, 3: 0, 4: 0}) == 0

    def test_negative_three(self):
        word = alloc_word(BitRegistry(), self.w)
        assert decode_word(word, {1: 0, 2: 1, 3: 1, 4: 1}) == -3

    def test_negative_zero(self):
        word = alloc_word(BitRegistry(), self.w)
        assert decode_word(word, {1: 0, 2: 0, 3: 0, 4: 1}) == 0

    def test_negated_literal_bits(self):
        word = alloc_word(BitRegistry(), self.w).negated()
        assert decode_word(word, {1: 1, 2: 0, 3: 0, 4: 1}) == Fraction(1, 2)

    @pytest.mark.parametrize("w", WIDTHS, ids=str)
    def test_every_pattern_is_on_the_grid(self, w):
        word = alloc_word(BitRegistry(), w)
        grid = set(w.grid())
        seen = set()
        for bits in itertools.product((0, 1), repeat=w.size):
            v = decode_word(word, dict(zip(word.bits, bits)))
            assert v in grid
            seen.add(v)
        assert seen == grid


@given(st.integers(1, 6), st.integers(0, 6), st.fractions(min_value=-40, max_value=40))
def test_nearest_error_is_half_a_step(n, m, value):
    w = BitWidth(n, m)
    try:
        stored = quantize(value, w, NEAREST)
    except ConstantOverflow:
        assert abs(value) > w.max_value - w.resolution / 2
        return
    assert abs(stored - value) <= w.resolution / 2
    assert w.representable(stored)


def test_varmap_round_trip():
    reg = BitRegistry()
    w = BitWidth(3, 2)
    entries = [("x", (1, 2), alloc_word(reg, w)), ("\\sigma", (), alloc_word(reg, w)),
               ("c", (4,), encode_constant(Fraction(-9, 4), w))]
    text = write_varmap(entries)
    assert read_varmap(text) == entries
    first = text.splitlines()[0]
    assert first == "var x 1,2 sign=6 int=5,4,3 frac=2,1"
