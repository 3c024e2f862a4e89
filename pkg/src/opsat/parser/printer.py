"""Canonical pretty-printer; ``parse(to_latex(t)) == t`` for parsed trees."""

from __future__ import annotations

from fractions import Fraction

from . import ast as A

_REL = {A.EQ: "=", A.NE: "\\neq", A.LT: "<", A.LE: "\\le", A.GT: ">", A.GE: "\\ge",
        A.IN: "\\in", A.NOTIN: "\\notin", A.SUBSET: "\\subset", A.SUBSETEQ: "\\subseteq",
        A.SUBSETNEQ: "\\subsetneq"}
_SETOP = {"cup": "\\cup", "cap": "\\cap", "setminus": "\\setminus"}
_PRED = {"R": "\\mathbb{R}", "R+": "\\mathbb{R}^+", "R-": "\\mathbb{R}^-", "Z": "\\mathbb{Z}",
         "Z+": "\\mathbb{Z}^+", "Z-": "\\mathbb{Z}^-", "N": "\\mathbb{N}", "empty": "\\emptyset"}

# atoms may be a power base or an implicit factor without parentheses
_ATOMS = (A.Const, A.VarRef, A.Bars, A.Indicator, A.Floor, A.Ceil)


def _const(c: A.Const) -> str:
    if c.text:
        return c.text
    v = Fraction(c.value)
    if v < 0:
        return "(-" + _const(A.Const(-v)) + ")"
    if v.denominator == 1:
        return str(v.numerator)
    d = v.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        digits = 0
        while (v * 10 ** digits).denominator != 1:
            digits += 1
        return f"{float(v):.{digits}f}" if digits <= 15 else f"\\frac{{{v.numerator}}}{{{v.denominator}}}"
    return f"\\frac{{{v.numerator}}}{{{v.denominator}}}"


def _paren(s: str) -> str:
    return "(" + s + ")"


def _factor(node, last: bool) -> str:
    """A factor inside a product."""
    s = to_latex(node)
    if isinstance(node, (A.Terms, A.Neg, A.Factors)):
        return _paren(s)
    if isinstance(node, A.Const) and node.value < 0 and not node.text:
        return s  # already parenthesized
    if isinstance(node, A.BigOp) and not last:
        return _paren(s)
    return s


def _binder(b) -> str:
    if isinstance(b, A.RangeBinder):
        inner = f"{to_latex(b.var)} = {to_latex(b.lower)}"
        if b.conditions:
            inner += ", " + _conds(b.conditions)
        return f"_{{{inner}}}^{{{to_latex(b.upper)}}}"
    return f"_{{{_conds(b.conditions)}}}"


def _conds(conds) -> str:
    return ", ".join(to_latex(c) for c in conds)


def _vars(vs) -> str:
    return ", ".join(to_latex(v) for v in vs)


def to_latex(node) -> str:
    """Render a syntax node as source text."""
    if isinstance(node, A.Const):
        return _const(node)
    if isinstance(node, A.VarRef):
        if not node.subs:
            return node.name
        return node.name + "_{" + ", ".join(to_latex(s) for s in node.subs) + "}"
    if isinstance(node, A.Neg):
        inner = to_latex(node.arg)
        if isinstance(node.arg, (A.Terms, A.Neg)):
            inner = _paren(inner)
        return "-" + inner
    if isinstance(node, A.Terms):
        parts = []
        for k, (t, sg) in enumerate(zip(node.terms, node.signs)):
            s = to_latex(t)
            if isinstance(t, (A.Terms, A.Neg)):
                s = _paren(s)
            if k == 0:
                parts.append(("- " if sg < 0 else "") + s)
            else:
                parts.append(("- " if sg < 0 else "+ ") + s)
        return " ".join(parts)
    if isinstance(node, A.Factors):
        n = len(node.factors)
        out = _factor(node.factors[0], n == 1)
        for k in range(1, n):
            op = node.ops[k]
            out += (" " if not op else f" {op} ") + _factor(node.factors[k], k == n - 1)
        return out
    if isinstance(node, A.Frac):
        return f"\\frac{{{to_latex(node.num)}}}{{{to_latex(node.den)}}}"
    if isinstance(node, A.Power):
        base = to_latex(node.base)
        if not isinstance(node.base, _ATOMS) or (isinstance(node.base, A.Const)
                                                  and node.base.value < 0):
            base = _paren(base) if not base.startswith("(") else base
        return f"{base}^{{{to_latex(node.exp)}}}"
    if isinstance(node, A.BigOp):
        body = to_latex(node.body)
        if isinstance(node.body, (A.Terms, A.Neg)):
            body = _paren(body)
        return f"\\{node.kind}{_binder(node.binder)} {body}"
    if isinstance(node, A.Bars):
        close = node.style
        return f"{node.style}{to_latex(node.arg)}{close}" if close == "|" else \
            f"\\vert {to_latex(node.arg)} \\vert"
    if isinstance(node, A.Indicator):
        return f"\\mathbb{{I}}({to_latex(node.relation)})"
    if isinstance(node, A.Floor):
        return f"\\lfloor {to_latex(node.arg)} \\rfloor"
    if isinstance(node, A.Ceil):
        return f"\\lceil {to_latex(node.arg)} \\rceil"
    if isinstance(node, A.Extremum):
        if node.over is not None:
            return f"\\{node.kind} {to_latex(node.over)}"
        return f"\\{node.kind}{_binder(node.binder)} \\{{{to_latex(node.body)}\\}}"
    # sets
    if isinstance(node, A.Predefined):
        return _PRED[node.name]
    if isinstance(node, A.SetLiteral):
        return "\\{" + ", ".join(to_latex(e) for e in node.elements) + "\\}"
    if isinstance(node, A.SetRange):
        return f"\\{{{to_latex(node.first)}, \\dots, {to_latex(node.last)}\\}}"
    if isinstance(node, A.SetVar):
        return to_latex(node.ref)
    if isinstance(node, A.SetOp):
        right = to_latex(node.right)
        if isinstance(node.right, A.SetOp):
            right = _paren(right)
        return f"{to_latex(node.left)} {_SETOP[node.op]} {right}"
    if isinstance(node, A.BigSetOp):
        body = to_latex(node.body)
        if isinstance(node.body, A.SetOp):
            body = _paren(body)
        return f"\\{node.kind}{_binder(node.binder)} {body}"
    # relations and conditions
    if isinstance(node, A.Relation):
        out = to_latex(node.operands[0])
        for op, x in zip(node.ops, node.operands[1:]):
            out += f" {_REL[op]} {to_latex(x)}"
        return out
    if isinstance(node, A.Membership):
        pre = "\\forall " if node.forall else ""
        return f"{pre}{_vars(node.vars)} {_REL[node.op]} {to_latex(node.set)}"
    if isinstance(node, A.EnumBinder):
        return f"{_vars(node.vars)} = {to_latex(node.first)}, \\dots, {to_latex(node.last)}"
    if isinstance(node, A.ChainBinder):
        xs = [node.lo, *node.vars, node.hi]
        out = to_latex(xs[0])
        for op, x in zip(node.ops, xs[1:]):
            out += f" {_REL[op]} {to_latex(x)}"
        return out
    if isinstance(node, A.RelCondition):
        return to_latex(node.relation)
    if isinstance(node, A.Objective):
        out = f"\\{node.direction} && {to_latex(node.expr)}"
        if node.conditions:
            out += " && " + _conds(node.conditions)
        return out
    if isinstance(node, A.Constraint):
        out = to_latex(node.relation)
        if node.conditions:
            out += " && " + _conds(node.conditions)
        return out
    if isinstance(node, A.Model):
        lines = [to_latex(node.objective)]
        for k, c in enumerate(node.constraints):
            lines.append(("s.t. && " if k == 0 else "&& ") + to_latex(c))
        return "\\begin{align}\n" + " \\\\\n".join(lines) + "\n\\end{align}\n"
    if isinstance(node, A.Assignment):
        return f"{to_latex(node.target)} = {to_latex(node.value)}"
    raise TypeError(f"cannot print {type(node).__name__}")
