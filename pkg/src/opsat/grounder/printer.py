"""Plain-text rendering of ground expressions for reports."""

from __future__ import annotations

from fractions import Fraction

from .nodes import (
    Enumeration, GAbs, GCeil, GConst, GFloor, GIndicator, GMax, GMin, GPower, GProduct, GScale,
    GSum, GVar, IntegerRange, RealRange,
)


def fmt_number(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _wrap(e) -> str:
    s = ground_to_text(e)
    return f"({s})" if isinstance(e, (GSum, GScale)) or (isinstance(e, GConst) and e.value < 0) else s


def ground_to_text(e) -> str:
    if isinstance(e, GConst):
        return fmt_number(e.value)
    if isinstance(e, GVar):
        return e.name
    if isinstance(e, GSum):
        return " + ".join(ground_to_text(a) for a in e.args)
    if isinstance(e, GProduct):
        return "*".join(_wrap(a) for a in e.args)
    if isinstance(e, GScale):
        return f"{_wrap(GConst(e.k))}*{_wrap(e.arg)}"
    if isinstance(e, GPower):
        return f"{_wrap(e.arg)}^{e.k}"
    if isinstance(e, GAbs):
        return f"|{ground_to_text(e.arg)}|"
    if isinstance(e, GFloor):
        return f"floor({ground_to_text(e.arg)})"
    if isinstance(e, GCeil):
        return f"ceil({ground_to_text(e.arg)})"
    if isinstance(e, (GMax, GMin)):
        name = "max" if isinstance(e, GMax) else "min"
        return f"{name}{{{', '.join(ground_to_text(a) for a in e.args)}}}"
    if isinstance(e, GIndicator):
        r = e.rel
        return f"I({ground_to_text(r.lhs)} {r.op} {ground_to_text(r.rhs)})"
    if isinstance(e, IntegerRange):
        lo = "-inf" if e.lo is None else e.lo
        hi = "inf" if e.hi is None else e.hi
        return f"Z[{lo}..{hi}]"
    if isinstance(e, RealRange):
        lo = "(-inf" if e.lo is None else ("(" if e.lo_open else "[") + fmt_number(e.lo)
        hi = "inf)" if e.hi is None else fmt_number(e.hi) + (")" if e.hi_open else "]")
        return f"R{lo}, {hi}"
    if isinstance(e, Enumeration):
        return "{" + ", ".join(ground_to_text(v) for v in e.values) + "}"
    raise TypeError(f"cannot render {type(e).__name__}")


# -- modeling-language rendering -------------------------------------------------

_REL = {"=": "=", "!=": "\\neq", "<": "<", "<=": "\\le", ">": ">", ">=": "\\ge"}


def _tex_number(q: Fraction) -> str:
    q = Fraction(q)
    mag = abs(q)
    s = str(mag.numerator) if mag.denominator == 1 else f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
    return f"(-{s})" if q < 0 else s


def _tex_var(v: GVar) -> str:
    if not v.index:
        return v.base
    return v.base + "_{" + ", ".join(str(i) for i in v.index) + "}"


def _tex_group(e) -> str:
    s = ground_to_latex(e)
    return s if isinstance(e, (GConst, GVar)) else f"({s})"


def ground_to_latex(e) -> str:
    """A ground expression in the modeling language (parses back to itself)."""
    if isinstance(e, GConst):
        return _tex_number(e.value)
    if isinstance(e, GVar):
        return _tex_var(e)
    if isinstance(e, GSum):
        return " + ".join(_tex_group(a) if isinstance(a, GSum) else ground_to_latex(a)
                          for a in e.args)
    if isinstance(e, GProduct):
        return " \\cdot ".join(_tex_group(a) for a in e.args)
    if isinstance(e, GScale):
        return f"{_tex_number(e.k)} \\cdot {_tex_group(e.arg)}"
    if isinstance(e, GPower):
        return f"{_tex_group(e.arg)}^{{{e.k}}}"
    if isinstance(e, GAbs):
        return f"|{ground_to_latex(e.arg)}|"
    if isinstance(e, GFloor):
        return f"\\lfloor {ground_to_latex(e.arg)} \\rfloor"
    if isinstance(e, GCeil):
        return f"\\lceil {ground_to_latex(e.arg)} \\rceil"
    if isinstance(e, (GMax, GMin)):
        name = "\\max" if isinstance(e, GMax) else "\\min"
        return name + " \\{" + ", ".join(ground_to_latex(a) for a in e.args) + "\\}"
    if isinstance(e, GIndicator):
        r = e.rel
        return (f"\\mathbb{{I}}({ground_to_latex(r.lhs)} {_REL[r.op]} "
                f"{ground_to_latex(r.rhs)})")
    raise TypeError(f"cannot render {type(e).__name__}")


def _domain_row(target, d) -> str:
    x = ground_to_latex(target)
    if isinstance(d, Enumeration):
        return f"{x} \\in \\{{" + ", ".join(ground_to_latex(v) for v in d.values) + "\\}"
    if isinstance(d, IntegerRange):
        if d.lo is not None and d.hi is not None:
            return f"{x} \\in \\{{{_tex_number(d.lo)}, \\dots, {_tex_number(d.hi)}\\}}"
        named = {(None, None): "\\mathbb{Z}", (0, None): "\\mathbb{N}",
                 (1, None): "\\mathbb{Z}^+", (None, -1): "\\mathbb{Z}^-"}
        if (d.lo, d.hi) in named:
            return f"{x} \\in {named[d.lo, d.hi]}"
    if isinstance(d, RealRange):
        if d.lo is not None and d.hi is not None:
            lo = "<" if d.lo_open else "\\le"
            hi = "<" if d.hi_open else "\\le"
            return f"{_tex_number(d.lo)} {lo} {x} {hi} {_tex_number(d.hi)}"
        if d.lo is None and d.hi is None:
            return f"{x} \\in \\mathbb{{R}}"
        if d.lo == 0 and d.lo_open and d.hi is None:
            return f"{x} \\in \\mathbb{{R}}^+"
        if d.hi == 0 and d.hi_open and d.lo is None:
            return f"{x} \\in \\mathbb{{R}}^-"
    raise ValueError(f"domain {ground_to_text(d)} has no direct surface form")


def model_to_latex(model) -> str:
    """Render a ground model as a model file without quantifiers.

    Constant-false constraints are written as ``1 \\le 0``.  Auxiliary
    division variables appear as ordinary variables with their product
    constraint.
    """
    from .nodes import DomainConstraint

    rows = [f"\\{model.direction} && {ground_to_latex(model.objective)}"]
    body = []
    for c in model.constraints:
        if isinstance(c, DomainConstraint):
            body.append(_domain_row(c.target, c.domain))
        else:
            body.append(f"{ground_to_latex(c.lhs)} {_REL[c.op]} {ground_to_latex(c.rhs)}")
    body.extend("1 \\le 0" for _ in model.contradictions)
    for i, row in enumerate(body):
        rows.append(("s.t. && " if i == 0 else "&& ") + row)
    return "\\begin{align}\n" + " \\\\\n".join(rows) + "\n\\end{align}\n"
