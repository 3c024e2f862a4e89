"""Post-order encoding of ground expression trees and the objective.

Every decision variable gets one word, shared by all constraints that
mention it; identical subtrees are encoded once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..backend.instance import MaxSatInstance
from ..codec import REJECT, BitWidth, FixedPointWord, encode_constant, neg, quantize
from ..errors import BoundOverflow, UnsupportedNode
from ..grounder.nodes import (
    DomainConstraint, Enumeration, GAbs, GCeil, GConst, GFloor, GIndicator, GMax, GMin, GPower,
    GProduct, GroundModel, GScale, GSum, GVar, IntegerRange, RealRange, RelationConstraint,
    map_constants,
)
from . import rules
from .emitter import CORRECTED, Emitter


@dataclass
class ObjectiveEncoding:
    u: FixedPointWord
    mu: FixedPointWord
    mu_hat: FixedPointWord
    soft: list            # (literal, weight)


@dataclass
class Reduction:
    instance: MaxSatInstance
    width: BitWidth
    words: dict                       # GVar -> word
    objective: ObjectiveEncoding
    stats: dict = field(default_factory=dict)
    precision: list = field(default_factory=list)     # PrecisionNote per rounded constant

    def varmap_entries(self) -> list:
        return [(v.base, v.index, w) for v, w in self.words.items()]


def _power_of_two(k: Fraction):
    """``j`` with ``|k| == 2**j`` for ``j >= 0``, else ``None``."""
    a = abs(k)
    if a.denominator != 1 or a == 0:
        return None
    a = int(a)
    if a & (a - 1):
        return None
    return a.bit_length() - 1


class TreeEncoder:
    def __init__(self, width: BitWidth, rounding: str = REJECT, fixes=CORRECTED,
                 shift_scale: bool = False, emitter: Emitter | None = None):
        self.w = width
        self.rounding = rounding
        self.shift_scale = shift_scale
        self.em = emitter or Emitter(fixes=fixes)
        self.words: dict = {}
        self.memo: dict = {}

    # -- leaves ----------------------------------------------------------------------

    def const(self, value) -> FixedPointWord:
        return encode_constant(value, self.w, self.rounding, registry=self.em.registry)

    def var(self, v: GVar) -> FixedPointWord:
        word = self.words.get(v)
        if word is None:
            word = self.em.fresh_word(self.w)
            self.words[v] = word
        return word

    # -- expressions --------------------------------------------------------------------

    def encode(self, e) -> FixedPointWord:
        if isinstance(e, GVar):
            return self.var(e)
        if isinstance(e, GConst):
            return self.const(e.value)
        hit = self.memo.get(e)
        if hit is not None:
            return hit
        word = self._encode_node(e)
        self.memo[e] = word
        return word

    def _out(self) -> FixedPointWord:
        return self.em.fresh_word(self.w)

    def _encode_node(self, e) -> FixedPointWord:
        em = self.em
        t = type(e)
        if t is GSum:
            ins = [self.encode(a) for a in e.args]
            c = self._out()
            with em.measure("Sum"):
                rules.sum_rule(em, ins, c)
            return c
        if t is GProduct:
            ins = [self.encode(a) for a in e.args]
            c = self._out()
            with em.measure("Product"):
                rules.product(em, ins, c)
            return c
        if t is GScale:
            a = self.encode(e.arg)
            j = _power_of_two(e.k) if self.shift_scale else None
            if j is not None:
                return self._shift(a, j, e.k < 0)
            k = self.const(e.k)
            c = self._out()
            with em.measure("Scale"):
                rules.product(em, [k, a], c)
            return c
        if t is GPower:
            a = self.encode(e.arg)
            c = self._out()
            with em.measure("Power"):
                rules.power(em, a, e.k, c)
            return c
        unary = {GAbs: ("Absolute", rules.absolute), GFloor: ("Floor", rules.floor_rule),
                 GCeil: ("Ceil", rules.ceil_rule)}
        if t in unary:
            name, fn = unary[t]
            a = self.encode(e.arg)
            c = self._out()
            with em.measure(name):
                fn(em, a, c)
            return c
        if t in (GMax, GMin):
            ins = [self.encode(a) for a in e.args]
            c = self._out()
            name, fn = ("Max", rules.max_rule) if t is GMax else ("Min", rules.min_rule)
            with em.measure(name):
                fn(em, ins, c)
            return c
        if t is GIndicator:
            a = self.encode(e.rel.lhs)
            b = self.encode(e.rel.rhs)
            r = em.fresh()
            with em.measure("Indicator"):
                rules.indicator(em, e.rel.op, a, b, r)
            bits = [False] * self.w.size
            bits[self.w.m] = r
            return FixedPointWord(tuple(bits), self.w)
        raise UnsupportedNode(f"cannot encode {t.__name__}")

    def _shift(self, a: FixedPointWord, j: int, negate: bool) -> FixedPointWord:
        """``a * (±2**j)`` by relabeling bits; shifted-out bits must be zero."""
        W = self.w.top
        with self.em.measure("Scale"):
            for i in range(max(0, W - j), W):
                self.em.clause(neg(a[i]))
        mag = [False] * min(j, W) + list(a.bits[: max(0, W - j)])
        sign = neg(a.sign) if negate else a.sign
        return FixedPointWord(tuple(mag) + (sign,), self.w)

    # -- constraints -----------------------------------------------------------------

    def constraint(self, c) -> None:
        em = self.em
        if isinstance(c, RelationConstraint):
            a = self.encode(c.lhs)
            b = self.encode(c.rhs)
            name = {"=": "Equal", "!=": "NotEqual", "<": "LessThan", "<=": "LessEqual",
                    ">": "LessThan", ">=": "LessEqual"}[c.op]
            with em.measure(name):
                rules.emit_relation(em, c.op, a, b)
            return
        if isinstance(c, DomainConstraint):
            a = self.encode(c.target)
            d = c.domain
            if isinstance(d, IntegerRange):
                top = 2 ** self.w.n - 1
                lo = -top if d.lo is None else max(d.lo, -top)
                hi = top if d.hi is None else min(d.hi, top)
                if lo > hi:
                    raise BoundOverflow(f"integer range {d.lo}..{d.hi} lies outside {self.w}")
                with em.measure("IntegerDomain"):
                    rules.integer_domain(em, a, lo, hi)
            elif isinstance(d, RealRange):
                bounds = self._real_bounds(d)
                if any(b is not None for b in bounds):
                    with em.measure("RealDomain"):
                        rules.real_domain(em, a, *bounds)
            elif isinstance(d, Enumeration):
                opts = [self.encode(v) for v in d.values]
                with em.measure("EnumerationDomain"):
                    rules.enumeration_domain(em, a, opts)
            else:
                raise UnsupportedNode(f"unknown domain {type(d).__name__}")
            return
        raise UnsupportedNode(f"cannot encode constraint {type(c).__name__}")

    def _real_bounds(self, d: RealRange):
        """(L1, R1, L2, R2) rounded inward onto the grid; sides beyond the word dropped."""
        scale = 2 ** self.w.m
        big = self.w.max_value
        L1 = R1 = L2 = R2 = None
        if d.lo is not None:
            lo = Fraction(d.lo)
            if lo > -big or (lo == -big and d.lo_open):
                if d.lo_open and (lo * scale).denominator == 1:
                    L2 = lo
                else:
                    L1 = Fraction(math.ceil(lo * scale), scale)
        if d.hi is not None:
            hi = Fraction(d.hi)
            if hi < big or (hi == big and d.hi_open):
                if d.hi_open and (hi * scale).denominator == 1:
                    R2 = hi
                else:
                    R1 = Fraction(math.floor(hi * scale), scale)
        return L1, R1, L2, R2

    # -- objective -------------------------------------------------------------------

    def objective(self, expr, direction: str) -> ObjectiveEncoding:
        u = self.encode(expr)
        mu = u.with_sign(neg(u.sign)) if direction == "min" else u
        mu_hat = self._out()
        with self.em.measure("Normalization"):
            rules.normalization(self.em, mu, mu_hat)
        soft = [(mu_hat[i], 2 ** i) for i in range(self.w.size)]
        return ObjectiveEncoding(u, mu, mu_hat, soft)


def reduce_model(model: GroundModel, width: BitWidth, rounding: str = REJECT,
                 fixes=CORRECTED, shift_scale: bool = False) -> Reduction:
    """Hard clauses for every ground constraint, soft unit clauses for the objective."""
    start = time.monotonic()
    enc = TreeEncoder(width, rounding, fixes, shift_scale)
    for v, _ in model.decision_vars:
        enc.var(v)
    for c in model.constraints:
        enc.constraint(c)
    if model.contradictions:
        enc.em.clause()
    obj = enc.objective(model.objective, model.direction)
    hard = enc.em.finish()
    soft = [((lit,), w) for lit, w in obj.soft]
    inst = MaxSatInstance(enc.em.registry.variable_count, hard, soft)
    stats = {
        "bool_vars": inst.variable_count,
        "hard_clauses": len(inst.hard),
        "soft_clauses": len(inst.soft),
        "raw_clauses": enc.em.raw_clauses,
        "decision_vars": len(model.decision_vars),
        "ground_constraints": len(model.constraints),
        "reduce_time": round(time.monotonic() - start, 6),
    }
    for name, st in sorted(enc.em.rule_stats.items()):
        stats[f"rule.{name}"] = st.calls
    return Reduction(inst, width, dict(enc.words), obj, stats, list(enc.em.registry.precision))


def stored_model(model: GroundModel, width: BitWidth, rounding: str = REJECT) -> GroundModel:
    """The model with every constant replaced by the value its word actually stores.

    Under ``reject`` this is the model itself.  Range bounds are left exact:
    the encoder rounds them inward, so the stored domain is a subset.
    """
    if rounding == REJECT:
        return model

    def q(v):
        return quantize(v, width, rounding)

    out = []
    for c in model.constraints:
        if isinstance(c, RelationConstraint):
            out.append(RelationConstraint(c.op, map_constants(c.lhs, q), map_constants(c.rhs, q),
                                          c.origin))
        elif isinstance(c.domain, Enumeration):
            dom = Enumeration(tuple(map_constants(v, q) for v in c.domain.values))
            out.append(DomainConstraint(map_constants(c.target, q), dom, c.origin))
        else:
            out.append(DomainConstraint(map_constants(c.target, q), c.domain, c.origin))
    gm = GroundModel(model.direction, map_constants(model.objective, q), out,
                     list(model.decision_vars), list(model.contradictions))
    gm.aux_defs = {t: (map_constants(a, q), map_constants(b, q))
                   for t, (a, b) in getattr(model, "aux_defs", {}).items()}
    return gm
