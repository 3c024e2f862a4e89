"""Quantifier-free ground expressions, constraints and domain records."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def display_name(base: str, index: tuple = ()) -> str:
    if not index:
        return base
    return base + "_{" + ",".join(str(i) for i in index) + "}"


@dataclass(frozen=True)
class GConst:
    value: Fraction


@dataclass(frozen=True)
class GVar:
    base: str
    index: tuple = ()

    @property
    def name(self) -> str:
        return display_name(self.base, self.index)


@dataclass(frozen=True)
class GSum:
    args: tuple


@dataclass(frozen=True)
class GProduct:
    args: tuple


@dataclass(frozen=True)
class GScale:
    k: Fraction
    arg: object


@dataclass(frozen=True)
class GPower:
    arg: object
    k: int


@dataclass(frozen=True)
class GAbs:
    arg: object


@dataclass(frozen=True)
class GFloor:
    arg: object


@dataclass(frozen=True)
class GCeil:
    arg: object


@dataclass(frozen=True)
class GMax:
    args: tuple


@dataclass(frozen=True)
class GMin:
    args: tuple


@dataclass(frozen=True)
class GRel:
    op: str          # one of = != < <= > >=
    lhs: object
    rhs: object


@dataclass(frozen=True)
class GIndicator:
    rel: GRel


# -- domains ---------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerRange:
    """Integers in ``[lo, hi]``; ``None`` means the word's own limit."""

    lo: int | None
    hi: int | None


@dataclass(frozen=True)
class RealRange:
    """``lo <= x <= hi``, with either side open (strict) or absent (``None``)."""

    lo: Fraction | None = None
    hi: Fraction | None = None
    lo_open: bool = False
    hi_open: bool = False


@dataclass(frozen=True)
class Enumeration:
    values: tuple    # GroundExpr, usually GConst


# -- constraints -----------------------------------------------------------------------

@dataclass(frozen=True)
class RelationConstraint:
    op: str
    lhs: object
    rhs: object
    origin: str = field(default="", compare=False)

    @property
    def rel(self) -> GRel:
        return GRel(self.op, self.lhs, self.rhs)


@dataclass(frozen=True)
class DomainConstraint:
    target: object   # GVar, or any GroundExpr for an enumeration over an expression
    domain: object
    origin: str = field(default="", compare=False)


@dataclass
class GroundModel:
    direction: str                   # "min" | "max"
    objective: object
    constraints: list = field(default_factory=list)
    decision_vars: list = field(default_factory=list)   # (GVar, kind)
    contradictions: list = field(default_factory=list)  # origins of constant-false constraints

    @property
    def variables(self) -> list:
        return [v for v, _ in self.decision_vars]

    def domains_of(self, var: GVar) -> list:
        return [c.domain for c in self.constraints
                if isinstance(c, DomainConstraint) and c.target == var]

    @property
    def integer_only(self) -> bool:
        return all(kind == "integer" for _, kind in self.decision_vars)


def walk(expr):
    """All nodes of a ground expression, pre-order."""
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        if isinstance(e, (GSum, GProduct, GMax, GMin)):
            stack.extend(reversed(e.args))
        elif isinstance(e, (GScale, GPower, GAbs, GFloor, GCeil)):
            stack.append(e.arg)
        elif isinstance(e, GIndicator):
            stack.append(e.rel.rhs)
            stack.append(e.rel.lhs)


def variables_of(expr) -> list:
    seen = {}
    for e in walk(expr):
        if isinstance(e, GVar):
            seen.setdefault(e, None)
    return list(seen)


def node_count(expr) -> int:
    return sum(1 for _ in walk(expr))


def map_constants(expr, fn):
    """Copy of ``expr`` with every constant value ``q`` (and scale factor) replaced by ``fn(q)``."""
    t = type(expr)
    if t is GConst:
        return GConst(fn(expr.value))
    if t is GVar:
        return expr
    if t in (GSum, GProduct, GMax, GMin):
        return t(tuple(map_constants(a, fn) for a in expr.args))
    if t is GScale:
        return GScale(fn(expr.k), map_constants(expr.arg, fn))
    if t is GPower:
        return GPower(map_constants(expr.arg, fn), expr.k)
    if t in (GAbs, GFloor, GCeil):
        return t(map_constants(expr.arg, fn))
    if t is GIndicator:
        r = expr.rel
        return GIndicator(GRel(r.op, map_constants(r.lhs, fn), map_constants(r.rhs, fn)))
    raise TypeError(f"unknown ground node {t.__name__}")
