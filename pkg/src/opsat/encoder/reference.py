"""Reference relations for the reduction rules, computed with exact rationals.

These are the arithmetic relations the rules are meant to realise at a given
width.  Finite precision enters through three documented policies:

* a result whose magnitude does not fit the word is infeasible;
* a product is truncated toward zero to the word's grid, and a product of
  nonzero factors that truncates to zero is infeasible;
* sums are evaluated in two's complement pairwise along the same balanced
  tree the multi-operand adder uses, and an intermediate outside
  ``[-2**(m+n), 2**(m+n) - 1]`` LSB units is infeasible.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..codec import BitWidth, word_pattern_value
from . import rules

RELATION_RULES = {"Equal": "=", "NotEqual": "!=", "LessThan": "<", "LessEqual": "<="}
KARY_RULES = {
    "Sum": rules.sum_rule,
    "Product": rules.product,
    "Max": rules.max_rule,
    "Min": rules.min_rule,
}
UNARY_RULES = {
    "Absolute": (rules.absolute, abs),
    "Floor": (rules.floor_rule, math.floor),
    "Ceil": (rules.ceil_rule, math.ceil),
}
DOMAIN_RULES = ("IntegerDomain", "RealDomain", "EnumerationDomain")

COMPARE = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def pattern_value(pattern, width: BitWidth) -> Fraction:
    return word_pattern_value(pattern, width)


def fits(value: Fraction, width: BitWidth) -> bool:
    return width.representable(value)


def truncate(value: Fraction, width: BitWidth) -> Fraction:
    scaled = value * 2 ** width.m
    k = abs(scaled.numerator) // scaled.denominator
    return Fraction(k if value >= 0 else -k, 2 ** width.m)


def multiply(x: Fraction, y: Fraction, width: BitWidth):
    """One multiplier stage: truncated product, or ``None`` on overflow."""
    p = x * y
    if abs(p) >= 2 ** width.n:
        return None
    return truncate(p, width)


def product_value(values, width: BitWidth):
    """Product of ``values`` under the multiplier policy, or ``None``."""
    if any(v == 0 for v in values):
        return Fraction(0)
    acc = multiply(values[0], values[1], width)
    for v in values[2:]:
        if acc is None:
            return None
        acc = multiply(acc, v, width)
    if acc is None or acc == 0:
        return None
    return acc


def _tree_sum(units: list, lo: int, hi: int):
    """Pairwise sum along the multi-adder tree; ``None`` if a stage overflows."""
    k = len(units)
    if k == 1:
        return units[0]
    if k == 2:
        parts = units
    elif k == 3:
        first = _tree_sum(units[:2], lo, hi)
        parts = [first, units[2]] if first is not None else None
    else:
        h = k // 2
        left, right = _tree_sum(units[:h], lo, hi), _tree_sum(units[h:], lo, hi)
        parts = [left, right] if left is not None and right is not None else None
    if parts is None:
        return None
    s = parts[0] + parts[1]
    return s if lo <= s <= hi else None


def sum_value(values, width: BitWidth):
    scale = 2 ** width.m
    units = [int(v * scale) for v in values]
    W = width.top
    s = _tree_sum(units, -(2 ** W), 2 ** W - 1)
    if s is None:
        return None
    v = Fraction(s, scale)
    return v if fits(v, width) else None


def _grid(width: BitWidth) -> list:
    return width.grid()


def power_values(x: Fraction, k: int, width: BitWidth) -> set:
    if k == 0:
        return {Fraction(1)}
    if k == 1:
        return {x}
    if k == -1:
        return {c for c in _grid(width) if product_value([x, c], width) == 1}
    (d1,) = power_values(x, abs(k) // 2, width) or {None}
    if d1 is None:
        return set()
    sel = product_value([d1, d1], width)
    if sel is not None and abs(k) % 2 == 1:
        sel = product_value([sel, x], width)
    if sel is None:
        return set()
    if k > 1:
        return {sel}
    return {c for c in _grid(width) if product_value([sel, c], width) == 1}


def expected_outputs(rule: str, width: BitWidth, params: tuple, pattern, values) -> set:
    """Set of output-value tuples the rule should admit for one input pattern."""
    if rule in RELATION_RULES:
        return {()} if COMPARE[RELATION_RULES[rule]](*values) else set()
    if rule == "Indicator":
        return {(1 if COMPARE[params[0]](*values) else 0,)}
    if rule == "Sum":
        v = sum_value(list(values), width)
        return set() if v is None else {(v,)}
    if rule == "Product":
        v = product_value(list(values), width)
        return set() if v is None else {(v,)}
    if rule == "Multiplier":
        v = multiply(values[0], values[1], width)
        return set() if v is None else {(v,)}
    if rule == "Max":
        return {(max(values),)}
    if rule == "Min":
        return {(min(values),)}
    if rule == "Power":
        return {(v,) for v in power_values(values[0], params[0], width)}
    if rule in UNARY_RULES:
        v = Fraction(UNARY_RULES[rule][1](values[0]))
        return {(v,)} if fits(v, width) else set()
    raise KeyError(rule)


def domain_values(rule: str, width: BitWidth, params: tuple) -> set:
    grid = _grid(width)
    if rule == "EnumerationDomain":
        return {Fraction(v) for v in params if fits(Fraction(v), width)}
    if rule == "IntegerDomain":
        L, R = params
        return {v for v in grid if v.denominator == 1 and L <= v <= R}
    L1, R1, L2, R2 = params
    out = set()
    for v in grid:
        if L1 is not None and v < L1:
            continue
        if R1 is not None and v > R1:
            continue
        if L2 is not None and v <= L2:
            continue
        if R2 is not None and v >= R2:
            continue
        out.add(v)
    return out


# -- two's complement view -------------------------------------------------------

def _units(pattern, width: BitWidth) -> int:
    return int(pattern_value(pattern, width) * 2 ** width.m)


def _twos_pattern(units: int, width: BitWidth) -> tuple:
    size = width.size
    u = units % (2 ** size)
    return tuple((u >> i) & 1 for i in range(size))


def _twos_value(pattern) -> int:
    size = len(pattern)
    u = sum(b << i for i, b in enumerate(pattern))
    return u - (2 ** size if pattern[-1] else 0)


def twos_outputs(rule: str, width: BitWidth, pattern) -> set:
    """Expected output bit patterns for the two's complement rules."""
    W = width.top
    if rule == "Complement":
        return {(_twos_pattern(_units(pattern[0], width), width),)}
    if rule == "Normalization":
        u = _units(pattern[0], width) + 2 ** W
        return {(tuple((u >> i) & 1 for i in range(width.size)),)}
    units = [_twos_value(p) for p in pattern]
    s = _tree_sum(units, -(2 ** W), 2 ** W - 1)
    if s is None:
        return set()
    return {(_twos_pattern(s, width),)}
