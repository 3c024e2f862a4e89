"""Assignment extraction, quantifier expansion and constant folding.

Grounding runs in two phases.  First, equalities whose one side is a bare
quantity and whose other side folds to a constant (or a concrete set) are
extracted as bindings, repeatedly in document order until a pass extracts
nothing.  Then every remaining constraint schema is expanded over its
quantifier and simplified, and the variables still unbound become the
decision variables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import (
    CyclicDefinition, DivisionByZeroConstant, ExpansionLimitExceeded, GroundingError,
    NonConstantSubscript, NonIntegerRangeEndpoint, TypeMismatch, UnboundedQuantifier,
    UndeclaredDomain, UnsupportedDomainShape,
)
from ..parser import ast as A
from .nodes import (
    DomainConstraint, Enumeration, GAbs, GCeil, GConst, GFloor, GIndicator, GMax, GMin, GPower,
    GProduct, GRel, GroundModel, GScale, GSum, GVar, IntegerRange, RealRange, RelationConstraint,
    node_count, variables_of,
)

ZERO, ONE = Fraction(0), Fraction(1)
AUX_DIV = "\\tau"    # base name of division auxiliaries, indexed from 1


@dataclass(frozen=True)
class ExpansionLimits:
    max_constraints: int = 10 ** 6
    max_nodes: int = 10 ** 7


class _Unresolved(Exception):
    """A value needed to be constant but is not (yet) known."""

    def __init__(self, what: str, kind: str = "quantifier"):
        super().__init__(what)
        self.what = what
        self.kind = kind

    def final_error(self) -> GroundingError:
        if self.kind == "subscript":
            return NonConstantSubscript(f"subscript of {self.what} does not fold to a constant")
        return UnboundedQuantifier(f"{self.what} is not known after grounding")


def _c(v) -> GConst:
    return GConst(Fraction(v))


def _is_const(e) -> bool:
    return isinstance(e, GConst)


def _as_int(v: Fraction, what: str, err=NonIntegerRangeEndpoint) -> int:
    if v.denominator != 1:
        raise err(f"{what} = {v} is not an integer")
    return int(v)


# -- simplifying constructors -------------------------------------------------------

def make_scale(k: Fraction, e):
    k = Fraction(k)
    if k == 0:
        return GConst(ZERO)
    if _is_const(e):
        return GConst(k * e.value)
    if isinstance(e, GScale):
        return make_scale(k * e.k, e.arg)
    if k == 1:
        return e
    return GScale(k, e)


def make_sum(args):
    const = ZERO
    rest = []
    for a in args:
        if _is_const(a):
            const += a.value
        elif isinstance(a, GSum):
            for b in a.args:
                if _is_const(b):
                    const += b.value
                else:
                    rest.append(b)
        else:
            rest.append(a)
    if const != 0 or not rest:
        rest.append(GConst(const))
    return rest[0] if len(rest) == 1 else GSum(tuple(rest))


def make_product(args):
    k = ONE
    rest = []
    for a in args:
        if _is_const(a):
            k *= a.value
        elif isinstance(a, GScale):
            k *= a.k
            rest.extend(a.arg.args if isinstance(a.arg, GProduct) else (a.arg,))
        elif isinstance(a, GProduct):
            rest.extend(a.args)
        else:
            rest.append(a)
    if k == 0 or not rest:
        return GConst(k if rest == [] else ZERO)
    if len(rest) == 1:
        return make_scale(k, rest[0])
    return make_scale(k, GProduct(tuple(rest)))


def make_power(base, k: int):
    if _is_const(base):
        if base.value == 0 and k < 0:
            raise DivisionByZeroConstant("zero raised to a negative power")
        return GConst(base.value ** k)
    if k == 1:
        return base
    return GPower(base, k)


def make_extremum(kind: str, args):
    args = list(args)
    if not args:
        raise TypeMismatch(f"\\{kind} over an empty collection")
    pick = max if kind == "max" else min
    consts = [a.value for a in args if _is_const(a)]
    rest = [a for a in args if not _is_const(a)]
    if not rest:
        return GConst(pick(consts))
    if consts:
        rest.append(GConst(pick(consts)))
    uniq = list(dict.fromkeys(rest))
    if len(uniq) == 1:
        return uniq[0]
    return (GMax if kind == "max" else GMin)(tuple(uniq))


def compare(op: str, a: Fraction, b: Fraction) -> bool:
    if op == A.EQ:
        return a == b
    if op == A.NE:
        return a != b
    if op == A.LT:
        return a < b
    if op == A.LE:
        return a <= b
    if op == A.GT:
        return a > b
    if op == A.GE:
        return a >= b
    raise ValueError(op)


def make_indicator(op: str, lhs, rhs):
    if _is_const(lhs) and _is_const(rhs):
        return GConst(ONE if compare(op, lhs.value, rhs.value) else ZERO)
    return GIndicator(GRel(op, lhs, rhs))


# -- the grounder -------------------------------------------------------------------------

_SET_REL = (A.IN, A.NOTIN, A.SUBSET, A.SUBSETEQ, A.SUBSETNEQ)
_PREDEFINED_DOMAINS = {
    "Z": IntegerRange(None, None),
    "Z+": IntegerRange(1, None),
    "Z-": IntegerRange(None, -1),
    "N": IntegerRange(0, None),
    "R": RealRange(),
    "R+": RealRange(ZERO, None, lo_open=True),
    "R-": RealRange(None, ZERO, hi_open=True),
}


class Grounder:
    def __init__(self, limits: ExpansionLimits | None = None, known: dict | None = None):
        self.limits = limits or ExpansionLimits()
        self.known: dict = dict(known or {})
        self.aux_defs: dict = {}           # GVar -> (dividend, divisor)
        self.pending_aux: list = []        # RelationConstraints for divisions
        self.allow_aux = True
        self.nodes = 0

    # -- lookups ------------------------------------------------------------------------

    def key(self, ref: A.VarRef, env: dict) -> tuple:
        idx = []
        for s in ref.subs:
            try:
                v = self.const(s, env)
            except _Unresolved:
                raise _Unresolved(A_name(ref), "subscript") from None
            idx.append(_as_int(v, f"subscript of {ref.name}", TypeMismatch))
        return ref.name, tuple(idx)

    def lookup(self, ref: A.VarRef, env: dict):
        """Known value (number or frozenset), or a GVar for an unknown scalar."""
        if not ref.subs and ref.name in env:
            return env[ref.name]
        base, idx = self.key(ref, env)
        if (base, idx) in self.known:
            return self.known[(base, idx)]
        return GVar(base, idx)

    # -- numeric expressions ------------------------------------------------------------------

    def const(self, node, env, what="value") -> Fraction:
        saved, self.allow_aux = self.allow_aux, False
        try:
            e = self.num(node, env)
        finally:
            self.allow_aux = saved
        if not _is_const(e):
            raise _Unresolved(what)
        return e.value

    def num(self, node, env: dict):
        t = type(node)
        if t is A.Const:
            return GConst(node.value)
        if t is A.VarRef:
            v = self.lookup(node, env)
            if isinstance(v, GVar):
                return v
            if isinstance(v, frozenset):
                raise TypeMismatch(f"set {A_name(node)} used as a number")
            return GConst(v)
        if t is A.Neg:
            return make_scale(-1, self.num(node.arg, env))
        if t is A.Terms:
            return make_sum(self.num(x, env) if s > 0 else make_scale(-1, self.num(x, env))
                            for x, s in zip(node.terms, node.signs))
        if t is A.Factors:
            return self.factors(node, env)
        if t is A.Frac:
            return self.divide(self.num(node.num, env), self.num(node.den, env))
        if t is A.Power:
            k = self.num(node.exp, env)
            if not _is_const(k) or k.value.denominator != 1:
                raise TypeMismatch("exponent must fold to an integer constant")
            return make_power(self.num(node.base, env), int(k.value))
        if t is A.BigOp:
            body = [self.num(node.body, e) for e in self.binder(node.binder, env)]
            return make_sum(body) if node.kind == "sum" else make_product(body)
        if t is A.Bars:
            return self.bars(node, env)
        if t is A.Indicator:
            return self.indicator(node.relation, env)
        if t is A.Floor:
            e = self.num(node.arg, env)
            return _c(math.floor(e.value)) if _is_const(e) else GFloor(e)
        if t is A.Ceil:
            e = self.num(node.arg, env)
            return _c(math.ceil(e.value)) if _is_const(e) else GCeil(e)
        if t is A.Extremum:
            if node.over is not None:
                items = self.set_items(node.over, env)
            else:
                items = [self.num(node.body, e) for e in self.binder(node.binder, env)]
            return make_extremum(node.kind, items)
        if A.is_set_node(node):
            raise TypeMismatch("set expression used as a number")
        raise TypeMismatch(f"unsupported expression {t.__name__}")

    def factors(self, node: A.Factors, env):
        acc = self.num(node.factors[0], env)
        for op, f in zip(node.ops[1:], node.factors[1:]):
            g = self.num(f, env)
            acc = self.divide(acc, g) if op == "/" else make_product([acc, g])
        return acc

    def divide(self, num, den):
        if _is_const(den):
            if den.value == 0:
                raise DivisionByZeroConstant("division by a constant zero")
            return make_scale(1 / den.value, num)
        if not self.allow_aux:
            raise _Unresolved("divisor")
        t = GVar(AUX_DIV, (len(self.aux_defs) + 1,))
        self.aux_defs[t] = (num, den)
        self.pending_aux.append(RelationConstraint(A.EQ, make_product([den, t]), num,
                                                   origin="division auxiliary"))
        return t

    def bars(self, node: A.Bars, env):
        arg = node.arg
        if A.is_set_node(arg):
            return _c(len(self.concrete_set(arg, env)))
        if type(arg) is A.VarRef:
            v = self.lookup(arg, env)
            if isinstance(v, frozenset):
                return _c(len(v))
        e = self.num(arg, env)
        return _c(abs(e.value)) if _is_const(e) else GAbs(e)

    def indicator(self, rel: A.Relation, env):
        parts = []
        xs = [self.num(x, env) if not A.is_set_node(x) else None for x in rel.operands]
        for op, (a, b), (na, nb) in zip(rel.ops, zip(xs, xs[1:]),
                                        zip(rel.operands, rel.operands[1:])):
            if op in _SET_REL or a is None or b is None:
                parts.append(_c(1 if self.truth_pair(op, na, nb, env) else 0))
            else:
                parts.append(make_indicator(op, a, b))
        return make_product(parts)

    # -- sets ---------------------------------------------------------------------------

    def set_items(self, node, env) -> list:
        """Elements of a set as ground expressions (literals may hold variables)."""
        if type(node) is A.SetLiteral:
            return [self.num(e, env) for e in node.elements]
        return [GConst(v) for v in sorted(self.concrete_set(node, env))]

    def concrete_set(self, node, env) -> frozenset:
        t = type(node)
        if t is A.Predefined:
            if node.name == "empty":
                return frozenset()
            raise UnboundedQuantifier(f"infinite set {node.name} where a finite set is needed")
        if t is A.SetLiteral:
            vals = []
            for e in node.elements:
                vals.append(self.const(e, env, "set element"))
            return frozenset(vals)
        if t is A.SetRange:
            lo = self.const(node.first, env, "range endpoint")
            hi = self.const(node.last, env, "range endpoint")
            lo_i = _as_int(lo, "range start")
            hi_i = _as_int(hi, "range end")
            return frozenset(Fraction(i) for i in range(lo_i, hi_i + 1))
        if t in (A.SetVar, A.VarRef):
            ref = node.ref if t is A.SetVar else node
            v = self.lookup(ref, env)
            if isinstance(v, frozenset):
                return v
            if isinstance(v, GVar):
                raise _Unresolved(f"set {A_name(ref)}")
            raise TypeMismatch(f"{A_name(ref)} is a number, not a set")
        if t is A.SetOp:
            a = self.concrete_set(node.left, env)
            b = self.concrete_set(node.right, env)
            return a | b if node.op == "cup" else a & b if node.op == "cap" else a - b
        if t is A.BigSetOp:
            parts = [self.concrete_set(node.body, e) for e in self.binder(node.binder, env)]
            if node.kind == "bigcup":
                return frozenset().union(*parts)
            if not parts:
                raise UnboundedQuantifier("intersection over an empty family")
            return frozenset.intersection(*parts)
        raise TypeMismatch("numeric expression used as a set")

    # -- conditions --------------------------------------------------------------------

    def binder(self, b, env):
        if isinstance(b, A.RangeBinder):
            lo = _as_int(self.const(b.lower, env, "range endpoint"), "range start")
            hi = _as_int(self.const(b.upper, env, "range endpoint"), "range end")
            for i in range(lo, hi + 1):
                e = dict(env)
                e[b.var.name] = Fraction(i)
                yield from self.expand(b.conditions, e)
        else:
            yield from self.expand(b.conditions, env)

    def expand(self, conds, env):
        """All extensions of ``env`` satisfying ``conds`` (left to right)."""
        if not conds:
            yield env
            return
        first, rest = conds[0], conds[1:]
        for e in self.expand_one(first, env):
            yield from self.expand(rest, e)

    def _bind_product(self, names, values, env):
        for combo in itertools.product(values, repeat=len(names)):
            e = dict(env)
            e.update(zip(names, combo))
            yield e

    def expand_one(self, cond, env):
        t = type(cond)
        if t is A.EnumBinder:
            lo = _as_int(self.const(cond.first, env, "range endpoint"), "range start")
            hi = _as_int(self.const(cond.last, env, "range endpoint"), "range end")
            vals = [Fraction(i) for i in range(lo, hi + 1)]
            yield from self._bind_product([v.name for v in cond.vars], vals, env)
        elif t is A.Membership:
            if cond.op != A.IN:
                if self.truth_pair(cond.op, cond.vars[0], cond.set, env):
                    yield env
                return
            free = [v.name for v in cond.vars if not v.subs and v.name not in env]
            bound = [v for v in cond.vars if v.subs or v.name in env]
            s = self.concrete_set(cond.set, env)
            for v in bound:
                if self.const(v, env, "membership operand") not in s:
                    return
            yield from self._bind_product(free, sorted(s), env)
        elif t is A.ChainBinder:
            lo = self.const(cond.lo, env, "bound")
            hi = self.const(cond.hi, env, "bound")
            vals = [Fraction(i) for i in range(math.ceil(lo), math.floor(hi) + 1)]
            names = [v.name for v in cond.vars]
            for e in self._bind_product(names, vals, env):
                chain = [lo] + [e[n] for n in names] + [hi]
                if all(compare(op, a, b) for op, a, b in zip(cond.ops, chain, chain[1:])):
                    yield e
        elif t is A.RelCondition:
            if self.truth(cond.relation, env):
                yield env
        else:
            raise TypeMismatch(f"unsupported condition {t.__name__}")

    def truth_pair(self, op, a, b, env) -> bool:
        if op in (A.IN, A.NOTIN):
            s = self.concrete_set(b, env)
            inside = self.const(a, env, "membership operand") in s
            return inside if op == A.IN else not inside
        is_set = A.is_set_node(a) or A.is_set_node(b) or op in (A.SUBSET, A.SUBSETEQ, A.SUBSETNEQ)
        if not is_set and type(a) is A.VarRef and isinstance(self.lookup(a, env), frozenset):
            is_set = True
        if is_set:
            x, y = self.concrete_set(a, env), self.concrete_set(b, env)
            return {A.EQ: x == y, A.NE: x != y, A.SUBSET: x < y, A.SUBSETNEQ: x < y,
                    A.SUBSETEQ: x <= y}[op]
        return compare(op, self.const(a, env, "condition operand"),
                       self.const(b, env, "condition operand"))

    def truth(self, rel: A.Relation, env) -> bool:
        xs = rel.operands
        return all(self.truth_pair(op, a, b, env) for op, a, b in zip(rel.ops, xs, xs[1:]))

    # -- assignments ---------------------------------------------------------------------

    def try_assign(self, rel: A.Relation, env) -> bool:
        """Bind one side of an ``=`` instance when the other side is constant."""
        a, b = rel.operands
        for lhs, rhs in ((a, b), (b, a)):
            ref = lhs.ref if type(lhs) is A.SetVar else lhs
            if type(ref) is not A.VarRef or (not ref.subs and ref.name in env):
                continue
            try:
                key = self.key(ref, env)
            except _Unresolved:
                continue
            if key in self.known:
                continue
            value = self.constant_value(rhs, env)
            if value is None:
                continue
            self.known[key] = value
            return True
        return False

    def constant_value(self, node, env):
        try:
            if A.is_set_node(node):
                return self.concrete_set(node, env)
            if type(node) is A.VarRef:
                v = self.lookup(node, env)
                if isinstance(v, frozenset):
                    return v
            return self.const(node, env)
        except _Unresolved:
            return None


def A_name(ref: A.VarRef) -> str:
    from ..parser.printer import to_latex
    return to_latex(ref)


# -- schema-level driver -----------------------------------------------------------

def _is_candidate(c: A.Constraint) -> bool:
    r = c.relation
    if r.ops != (A.EQ,) or len(r.operands) != 2:
        return False
    return any(type(x) in (A.VarRef, A.SetVar) for x in r.operands)


def _origin(c, k: int, env: dict) -> str:
    where = f"line {c.span[0]}" if c.span else f"constraint {k + 1}"
    if env:
        where += " [" + ", ".join(f"{n}={_fmt(v)}" for n, v in env.items()) + "]"
    return where


def _fmt(v) -> str:
    return str(v.numerator) if isinstance(v, Fraction) and v.denominator == 1 else str(v)


def assignment_constraints(data) -> list:
    """Instance-data assignments as ``=`` constraints appended to the model."""
    return [A.Constraint(A.Relation((A.EQ,), (a.target, a.value), a.span), (), a.span)
            for a in data]


def ground_model(model: A.Model, data=(), limits: ExpansionLimits | None = None,
                 strict_domains: bool = False):
    """Ground ``model`` with instance ``data``; returns ``(GroundModel, bindings)``."""
    g = Grounder(limits)
    items = list(model.constraints) + assignment_constraints(data)
    done = [False] * len(items)

    progress = True
    while progress:
        progress = False
        for k, c in enumerate(items):
            if done[k] or not _is_candidate(c):
                continue
            try:
                envs = list(g.expand(c.conditions, {}))
            except _Unresolved:
                continue
            all_bound = True
            for env in envs:
                if g.try_assign(c.relation, env):
                    progress = True
                else:
                    all_bound = False
            if all_bound:
                done[k] = True

    out = _Final(g, strict_domains)
    try:
        for k, c in enumerate(items):
            if done[k]:
                continue
            for env in g.expand(c.conditions, {}):
                out.add_relation(c.relation, _origin(c, k, env), env)
        obj = model.objective
        envs = list(g.expand(obj.conditions, {}))
        if len(envs) != 1:
            raise UnboundedQuantifier("objective conditions must select exactly one binding")
        objective = g.num(obj.expr, envs[0])
    except _Unresolved as exc:
        raise exc.final_error() from None
    for c in g.pending_aux:
        out.push(c)
    ground = out.finish(obj.direction, objective, items)
    return ground, dict(g.known)


class _Final:
    """Collects ground constraints and classifies domains."""

    def __init__(self, g: Grounder, strict: bool):
        self.g = g
        self.strict = strict
        self.relations: list = []
        self.domain_facts: dict = {}      # GVar -> list of (record, origin)
        self.contradictions: list = []
        self.count = 0

    def _tick(self) -> None:
        self.count += 1
        if self.count > self.g.limits.max_constraints:
            raise ExpansionLimitExceeded(
                f"more than {self.g.limits.max_constraints} ground constraints")

    def push(self, c) -> None:
        self._tick()
        if isinstance(c, RelationConstraint):
            self.g.nodes += node_count(c.lhs) + node_count(c.rhs)
        if self.g.nodes > self.g.limits.max_nodes:
            raise ExpansionLimitExceeded(f"more than {self.g.limits.max_nodes} expression nodes")
        self.relations.append(c)

    def fact(self, var, record, origin) -> None:
        self._tick()
        self.domain_facts.setdefault(var, []).append((record, origin))

    def constant(self, ok: bool, origin: str) -> None:
        if not ok:
            self.contradictions.append(origin)

    def add_relation(self, rel: A.Relation, origin: str, env: dict) -> None:
        g = self.g
        xs = rel.operands
        if any(op in _SET_REL for op in rel.ops) or any(A.is_set_node(x) for x in xs):
            for op, a, b in zip(rel.ops, xs, xs[1:]):
                self.set_relation(op, a, b, origin, env)
            return
        # set-valued names compared with "="
        if all(type(x) is A.VarRef and isinstance(g.lookup(x, env), frozenset) for x in xs):
            self.constant(g.truth(rel, env), origin)
            return
        ground = [g.num(x, env) for x in xs]
        if (len(ground) == 3 and _is_const(ground[0]) and _is_const(ground[2])
                and isinstance(ground[1], GVar)):
            ops = rel.ops
            if all(op in (A.LT, A.LE) for op in ops):
                self.fact(ground[1], RealRange(ground[0].value, ground[2].value,
                                               ops[0] == A.LT, ops[1] == A.LT), origin)
                return
            if all(op in (A.GT, A.GE) for op in ops):
                self.fact(ground[1], RealRange(ground[2].value, ground[0].value,
                                               ops[1] == A.GT, ops[0] == A.GT), origin)
                return
        for op, a, b in zip(rel.ops, ground, ground[1:]):
            if _is_const(a) and _is_const(b):
                self.constant(compare(op, a.value, b.value), origin)
            else:
                self.push(RelationConstraint(op, a, b, origin))

    def set_relation(self, op, a, b, origin, env) -> None:
        g = self.g
        if op in (A.IN, A.NOTIN):
            lhs = g.num(a, env)
            if type(b) is A.Predefined and b.name != "empty":
                if op == A.NOTIN or not isinstance(lhs, GVar):
                    if _is_const(lhs) and op == A.IN:
                        self.constant(_in_predefined(lhs.value, b.name), origin)
                        return
                    raise UnsupportedDomainShape(f"{origin}: unsupported membership in {b.name}")
                self.fact(lhs, _PREDEFINED_DOMAINS[b.name], origin)
                return
            if type(b) is A.SetRange and op == A.IN and not _is_const(lhs):
                lo = g.const(b.first, env, "range endpoint")
                hi = g.const(b.last, env, "range endpoint")
                rec = IntegerRange(_as_int(lo, "range start"), _as_int(hi, "range end"))
                self._domain(lhs, rec, origin)
                return
            items = list(dict.fromkeys(g.set_items(b, env)))
            if all(_is_const(x) for x in items) and _is_const(lhs):
                inside = lhs.value in {x.value for x in items}
                self.constant(inside == (op == A.IN), origin)
                return
            if op == A.NOTIN:
                for x in items:
                    if _is_const(x) and _is_const(lhs):
                        self.constant(x.value != lhs.value, origin)
                    else:
                        self.push(RelationConstraint(A.NE, lhs, x, origin))
                return
            if not items:
                self.contradictions.append(origin)
                return
            self._domain(lhs, Enumeration(tuple(items)), origin)
            return
        # set equality / inclusion: sets are constants, so it must fold
        try:
            self.constant(g.truth_pair(op, a, b, env), origin)
        except TypeMismatch:
            raise UnsupportedDomainShape(
                f"{origin}: set-valued decision variables are not supported") from None

    def _domain(self, target, record, origin) -> None:
        if isinstance(target, GVar):
            self.fact(target, record, origin)
        elif isinstance(record, Enumeration):
            self.push(DomainConstraint(target, record, origin))
        else:
            self.push(DomainConstraint(target, record, origin))

    def finish(self, direction, objective, items) -> GroundModel:
        constraints = []
        decisions = {}
        for var, facts in self.domain_facts.items():
            records = merge_domains([r for r, _ in facts])
            origin = facts[0][1]
            for rec in records:
                if _empty(rec):
                    self.contradictions.append(f"{origin}: empty domain for {var.name}")
                constraints.append(DomainConstraint(var, rec, origin))
            decisions[var] = _kind(records)
        constraints.extend(self.relations)
        order = {}
        for v in variables_of(objective):
            order.setdefault(v, None)
        for c in constraints:
            if isinstance(c, RelationConstraint):
                for v in variables_of(c.lhs) + variables_of(c.rhs):
                    order.setdefault(v, None)
            else:
                order.setdefault(c.target, None) if isinstance(c.target, GVar) else None
                for v in variables_of(c.target):
                    order.setdefault(v, None)
                for x in c.domain.values if isinstance(c.domain, Enumeration) else ():
                    for v in variables_of(x):
                        order.setdefault(v, None)
        decision_vars = []
        free = []
        for v in order:
            if v in decisions:
                decision_vars.append((v, decisions[v]))
            elif v.base == AUX_DIV and v in self.g.aux_defs:
                decision_vars.append((v, "aux"))
            else:
                free.append(v)
        if free:
            _check_cycles(free, constraints)
            if self.strict:
                raise UndeclaredDomain(f"no domain constraint for {free[0].name}")
            decision_vars.extend((v, "free") for v in free)
        gm = GroundModel(direction, objective, constraints, decision_vars, self.contradictions)
        gm.aux_defs = dict(self.g.aux_defs)
        return gm


def _in_predefined(v: Fraction, name: str) -> bool:
    integral = v.denominator == 1
    return {"Z": integral, "Z+": integral and v >= 1, "Z-": integral and v <= -1,
            "N": integral and v >= 0, "R": True, "R+": v > 0, "R-": v < 0}[name]


def _check_cycles(free, constraints) -> None:
    """Undeclared quantities defined only through each other are a modeling error."""
    free_set = set(free)
    edges: dict = {}
    for c in constraints:
        if isinstance(c, RelationConstraint) and c.op == A.EQ:
            for lhs, rhs in ((c.lhs, c.rhs), (c.rhs, c.lhs)):
                if isinstance(lhs, GVar) and lhs in free_set:
                    deps = variables_of(rhs)
                    if deps and all(d in free_set for d in deps):
                        edges.setdefault(lhs, set()).update(deps)
    state: dict = {}

    def visit(v):
        state[v] = 1
        for w in edges.get(v, ()):
            if state.get(w) == 1:
                raise CyclicDefinition(f"{v.name} and {w.name} are defined only by each other")
            if w not in state:
                visit(w)
        state[v] = 2

    for v in list(edges):
        if v not in state:
            visit(v)


def _empty(rec) -> bool:
    if isinstance(rec, IntegerRange):
        return rec.lo is not None and rec.hi is not None and rec.lo > rec.hi
    if isinstance(rec, RealRange):
        if rec.lo is None or rec.hi is None:
            return False
        return rec.lo > rec.hi or (rec.lo == rec.hi and (rec.lo_open or rec.hi_open))
    return False


def _kind(records) -> str:
    for r in records:
        if isinstance(r, IntegerRange):
            return "integer"
        if isinstance(r, Enumeration) and all(
                isinstance(x, GConst) and x.value.denominator == 1 for x in r.values):
            return "integer"
    return "real"


def merge_domains(records) -> list:
    """Conjoin domain facts of one variable.

    Ranges are intersected; any integer fact turns the intersection into an
    integer range.  Enumerations are kept as separate conjuncts.
    """
    ranges = [r for r in records if isinstance(r, (IntegerRange, RealRange))]
    enums = [r for r in records if isinstance(r, Enumeration)]
    if not ranges:
        return enums
    integral = any(isinstance(r, IntegerRange) for r in ranges)
    lo = hi = None
    lo_open = hi_open = False
    for r in ranges:
        r_lo, r_hi = r.lo, r.hi
        r_lo_open = getattr(r, "lo_open", False)
        r_hi_open = getattr(r, "hi_open", False)
        if r_lo is not None:
            r_lo = Fraction(r_lo)
            if lo is None or r_lo > lo or (r_lo == lo and r_lo_open):
                lo, lo_open = r_lo, r_lo_open
        if r_hi is not None:
            r_hi = Fraction(r_hi)
            if hi is None or r_hi < hi or (r_hi == hi and r_hi_open):
                hi, hi_open = r_hi, r_hi_open
    if integral:
        ilo = None if lo is None else (math.floor(lo) + 1 if lo_open else math.ceil(lo))
        ihi = None if hi is None else (math.ceil(hi) - 1 if hi_open else math.floor(hi))
        merged = IntegerRange(ilo, ihi)
    else:
        merged = RealRange(lo, hi, lo_open, hi_open)
    return [merged] + enums


def classify_domain(*records):
    """Normalize the domain facts of one variable into a single record."""
    merged = merge_domains(records)
    if len(merged) != 1:
        raise UnsupportedDomainShape("domain facts do not combine into one record")
    return merged[0]


def simplify_expr(expr, bindings: dict | None = None, env: dict | None = None):
    """Ground and fold ``expr`` under known ``bindings`` and bound variables ``env``.

    ``bindings`` maps ``(name, index)`` (or a bare name) to a number or set.
    """
    known = {}
    for k, v in (bindings or {}).items():
        key = k if isinstance(k, tuple) else (k, ())
        known[key] = frozenset(Fraction(x) for x in v) if isinstance(v, (set, frozenset)) \
            else Fraction(v)
    g = Grounder(known=known)
    env = {k: Fraction(v) for k, v in (env or {}).items()}
    try:
        return g.num(expr, env)
    except _Unresolved as exc:
        raise exc.final_error() from None
