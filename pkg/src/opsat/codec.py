"""Signed binary fixed-point words over Boolean variables.

A word of width ``(n, m)`` holds ``m + n + 1`` bits.  Index 0 is the least
significant fractional bit, index ``m + n`` is the sign bit, and the value is

    (-1) ** bit[m+n] * sum(2 ** (i - m) * bit[i] for i < m + n)

Each bit is either a signed DIMACS literal (``int``, never 0) or a fixed
constant (``True`` / ``False``).  Constants are compared by identity so that
the literal ``1`` is never mistaken for ``True``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConstantOverflow, InexactConstant, MissingBit

Bit = Union[int, bool]

REJECT = "reject"
NEAREST = "nearest"


def is_const(bit: Bit) -> bool:
    return bit is True or bit is False


def neg(bit: Bit) -> Bit:
    if bit is True:
        return False
    if bit is False:
        return True
    return -bit


@dataclass(frozen=True)
class BitWidth:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ValueError(f"invalid width n={self.n}, m={self.m}")

    @property
    def size(self) -> int:
        return self.m + self.n + 1

    @property
    def top(self) -> int:
        """Index of the sign bit (``m + n``)."""
        return self.m + self.n

    @property
    def max_value(self) -> Fraction:
        return Fraction(2 ** self.n) - Fraction(1, 2 ** self.m)

    @property
    def resolution(self) -> Fraction:
        return Fraction(1, 2 ** self.m)

    def representable(self, value) -> bool:
        value = Fraction(value)
        return abs(value) <= self.max_value and (value * 2 ** self.m).denominator == 1

    def grid(self, lo=None, hi=None) -> list[Fraction]:
        """All representable values in ``[lo, hi]`` (zero listed once)."""
        step = 2 ** self.m
        top = 2 ** (self.n + self.m) - 1
        lo_i = -top if lo is None else max(-top, _ceil(Fraction(lo) * step))
        hi_i = top if hi is None else min(top, _floor(Fraction(hi) * step))
        return [Fraction(k, step) for k in range(lo_i, hi_i + 1)]

    def __str__(self) -> str:
        return f"(n={self.n}, m={self.m})"


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class FixedPointWord:
    bits: tuple
    width: BitWidth

    def __post_init__(self):
        if len(self.bits) != self.width.size:
            raise ValueError(f"word has {len(self.bits)} bits, width needs {self.width.size}")

    @property
    def sign(self) -> Bit:
        return self.bits[-1]

    @property
    def magnitude(self) -> tuple:
        return self.bits[:-1]

    @property
    def int_bits(self) -> tuple:
        return self.bits[self.width.m:-1]

    @property
    def frac_bits(self) -> tuple:
        return self.bits[: self.width.m]

    def with_sign(self, bit: Bit) -> "FixedPointWord":
        return FixedPointWord(self.bits[:-1] + (bit,), self.width)

    def negated(self) -> "FixedPointWord":
        """The word of ``-v``: sign bit relabelled, no clauses needed."""
        return self.with_sign(neg(self.sign))

    def variables(self) -> list[int]:
        return [abs(b) for b in self.bits if not is_const(b)]

    def is_constant(self) -> bool:
        return all(is_const(b) for b in self.bits)

    def __getitem__(self, i: int) -> Bit:
        return self.bits[i]

    def __len__(self) -> int:
        return len(self.bits)


@dataclass
class PrecisionNote:
    value: Fraction
    stored: Fraction

    @property
    def error(self) -> Fraction:
        return abs(self.stored - self.value)


@dataclass
class BitRegistry:
    """Fresh-variable counter plus the variable map ``Q`` and known map ``P``."""

    next_id: int = 1
    words: dict = field(default_factory=dict)
    known: dict = field(default_factory=dict)
    precision: list = field(default_factory=list)

    def fresh(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def fresh_many(self, k: int) -> list[int]:
        start = self.next_id
        self.next_id += k
        return list(range(start, start + k))

    @property
    def variable_count(self) -> int:
        return self.next_id - 1


def alloc_word(registry: BitRegistry, width: BitWidth) -> FixedPointWord:
    return FixedPointWord(tuple(registry.fresh_many(width.size)), width)


def quantize(value, width: BitWidth, rounding: str = REJECT) -> Fraction:
    """Return the representable value ``value`` is stored as."""
    value = Fraction(value)
    scaled = value * 2 ** width.m
    if scaled.denominator != 1:
        if rounding == REJECT:
            raise InexactConstant(value, width)
        mag = abs(scaled)
        k = _floor(mag + Fraction(1, 2))  # half away from zero
        scaled = Fraction(k if value >= 0 else -k)
    stored = scaled / 2 ** width.m
    if abs(stored) > width.max_value:
        raise ConstantOverflow(value, width)
    return stored


def encode_constant(value, width: BitWidth, rounding: str = REJECT,
                    registry: BitRegistry | None = None) -> FixedPointWord:
    value = Fraction(value)
    if abs(value) > width.max_value:
        raise ConstantOverflow(value, width)
    stored = quantize(value, width, rounding)
    if stored != value and registry is not None:
        registry.precision.append(PrecisionNote(value, stored))
    k = int(abs(stored) * 2 ** width.m)
    bits = [bool((k >> i) & 1) for i in range(width.top)]
    bits.append(stored < 0)
    return FixedPointWord(tuple(bits), width)


def bit_value(bit: Bit, assignment) -> int:
    if bit is True:
        return 1
    if bit is False:
        return 0
    var = abs(bit)
    try:
        val = assignment[var]
    except (KeyError, IndexError):
        raise MissingBit(var) from None
    if val is None:
        raise MissingBit(var)
    val = 1 if val else 0
    return val if bit > 0 else 1 - val


def word_integer(word: FixedPointWord, assignment) -> int:
    """Signed integer ``v(a) * 2**m``."""
    mag = 0
    for i, b in enumerate(word.magnitude):
        mag |= bit_value(b, assignment) << i
    return -mag if bit_value(word.sign, assignment) else mag


def decode_word(word: FixedPointWord, assignment) -> Fraction:
    return Fraction(word_integer(word, assignment), 2 ** word.width.m)


def word_pattern_value(word_bits: Sequence[int], width: BitWidth) -> Fraction:
    """Value of a raw 0/1 pattern given LSB first (sign last)."""
    mag = sum(b << i for i, b in enumerate(word_bits[:-1]))
    return Fraction(-mag if word_bits[-1] else mag, 2 ** width.m)


# -- varmap sidecar ----------------------------------------------------------

def _fmt_bit(bit: Bit) -> str:
    if bit is True:
        return "T"
    if bit is False:
        return "F"
    return str(bit)


def _parse_bit(text: str) -> Bit:
    if text == "T":
        return True
    if text == "F":
        return False
    return int(text)


def format_varmap_line(name: str, index: tuple, word: FixedPointWord) -> str:
    m = word.width.m
    subs = ",".join(str(i) for i in index) if index else "-"
    ints = ",".join(_fmt_bit(b) for b in reversed(word.bits[m:-1]))
    fracs = ",".join(_fmt_bit(b) for b in reversed(word.bits[:m]))
    return f"var {name} {subs} sign={_fmt_bit(word.sign)} int={ints} frac={fracs}"


def write_varmap(entries: Iterable[tuple[str, tuple, FixedPointWord]]) -> str:
    return "".join(format_varmap_line(*e) + "\n" for e in entries)


def read_varmap(text: str) -> list[tuple[str, tuple, FixedPointWord]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 6 or parts[0] != "var":
            raise ValueError(f"varmap line {lineno}: malformed: {line!r}")
        name, subs = parts[1], parts[2]
        fields = dict(p.split("=", 1) for p in parts[3:])
        index = () if subs == "-" else tuple(int(s) for s in subs.split(","))
        ints = [_parse_bit(t) for t in fields["int"].split(",") if t]
        fracs = [_parse_bit(t) for t in fields["frac"].split(",") if t]
        bits = tuple(reversed(fracs)) + tuple(reversed(ints)) + (_parse_bit(fields["sign"]),)
        width = BitWidth(len(ints), len(fracs))
        out.append((name, index, FixedPointWord(bits, width)))
    return out
