"""Syntax tree of the modeling language.

Nodes are frozen dataclasses compared structurally; source spans are kept
out of equality so a pretty-printed and re-parsed tree compares equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

_SPAN = dict(default=None, compare=False, repr=False)

# relation operators, normalized
EQ, NE, LT, LE, GT, GE = "=", "!=", "<", "<=", ">", ">="
IN, NOTIN = "in", "notin"
SUBSET, SUBSETEQ, SUBSETNEQ = "subset", "subseteq", "subsetneq"
ORDER_OPS = (LT, LE, GT, GE)
NUMERIC_OPS = (EQ, NE, LT, LE, GT, GE)


# -- numeric expressions -------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction
    text: str = field(default="", compare=False)  # literal as written
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class VarRef:
    name: str                # "x", "\\sigma", "\\mathcal{X}"
    subs: tuple = ()         # numeric expressions
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Neg:
    arg: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Terms:
    """``t0 ± t1 ± ...``; ``signs[k]`` is +1 or -1 and ``signs[0]`` is +1."""

    terms: tuple
    signs: tuple
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Factors:
    """``f0 op1 f1 ...`` with ``ops[k]`` in {"", "\\cdot", "\\times", "/"}; ops[0] is ""."""

    factors: tuple
    ops: tuple
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Frac:
    num: object
    den: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Power:
    base: object
    exp: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class RangeBinder:
    """``_{var = lower, conditions}^{upper}``."""

    var: VarRef
    lower: object
    upper: object
    conditions: tuple = ()


@dataclass(frozen=True)
class CondBinder:
    """``_{conditions}``."""

    conditions: tuple


@dataclass(frozen=True)
class BigOp:
    kind: str        # "sum" | "prod"
    binder: object
    body: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Bars:
    """``|x|``: absolute value of a number or cardinality of a set."""

    arg: object
    style: str = "|"
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Indicator:
    relation: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Floor:
    arg: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Ceil:
    arg: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Extremum:
    """``\\max``/``\\min`` over a set expression or a bound body.

    Exactly one of ``over`` (a set expression) and ``binder`` + ``body`` is
    set.
    """

    kind: str        # "max" | "min"
    over: object = None
    binder: object = None
    body: object = None
    span: tuple = field(**_SPAN)


# -- set expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Predefined:
    name: str        # "R", "R+", "R-", "Z", "Z+", "Z-", "N", "empty"
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class SetLiteral:
    elements: tuple
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class SetRange:
    first: object
    last: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class SetVar:
    ref: VarRef
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class SetOp:
    op: str          # "cup" | "cap" | "setminus"
    left: object
    right: object
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class BigSetOp:
    kind: str        # "bigcup" | "bigcap"
    binder: object
    body: object
    span: tuple = field(**_SPAN)


SET_NODES = (Predefined, SetLiteral, SetRange, SetVar, SetOp, BigSetOp)


# -- relations and conditions ------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """A chain ``operands[0] ops[0] operands[1] ...`` kept as written."""

    ops: tuple
    operands: tuple
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Membership:
    vars: tuple
    set: object
    op: str = IN             # IN or one of the subset operators
    forall: bool = False


@dataclass(frozen=True)
class EnumBinder:
    """``i, j = a, ..., b``."""

    vars: tuple
    first: object
    last: object


@dataclass(frozen=True)
class ChainBinder:
    """``lo < i <= j < hi`` binding the middle variables."""

    lo: object
    vars: tuple
    ops: tuple
    hi: object


@dataclass(frozen=True)
class RelCondition:
    relation: Relation


# -- model --------------------------------------------------------------------------

@dataclass(frozen=True)
class Objective:
    direction: str           # "min" | "max"
    expr: object
    conditions: tuple = ()
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Constraint:
    relation: Relation
    conditions: tuple = ()
    span: tuple = field(**_SPAN)


@dataclass(frozen=True)
class Model:
    objective: Objective
    constraints: tuple = ()


@dataclass(frozen=True)
class Assignment:
    target: VarRef
    value: object            # numeric or set expression
    span: tuple = field(**_SPAN)


def is_set_node(node) -> bool:
    return isinstance(node, SET_NODES)
