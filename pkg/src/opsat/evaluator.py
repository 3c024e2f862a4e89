"""Exact rational interpreter for ground models.

This is the independent oracle: it never looks at clauses, only at the
ground expressions, and does all arithmetic in :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .codec import BitWidth, decode_word
from .errors import EvalDivisionByZero, MissingValue, SearchSpaceTooLarge
from .grounder.ground import compare
from .grounder.nodes import (
    Enumeration, GAbs, GCeil, GConst, GFloor, GIndicator, GMax, GMin, GPower,
    GProduct, GroundModel, GScale, GSum, GVar, IntegerRange, RealRange, RelationConstraint,
)

SEARCH_LIMIT = 10 ** 6


def evaluate_numeric(expr, values) -> Fraction:
    """Value of a ground expression; ``values`` maps GVar (or display name) to a number."""
    t = type(expr)
    if t is GConst:
        return expr.value
    if t is GVar:
        if expr in values:
            return Fraction(values[expr])
        if expr.name in values:
            return Fraction(values[expr.name])
        raise MissingValue(expr.name)
    if t is GSum:
        return sum((evaluate_numeric(a, values) for a in expr.args), Fraction(0))
    if t is GProduct:
        out = Fraction(1)
        for a in expr.args:
            out *= evaluate_numeric(a, values)
        return out
    if t is GScale:
        return expr.k * evaluate_numeric(expr.arg, values)
    if t is GPower:
        base = evaluate_numeric(expr.arg, values)
        if base == 0 and expr.k < 0:
            raise EvalDivisionByZero("zero raised to a negative power")
        return base ** expr.k
    if t is GAbs:
        return abs(evaluate_numeric(expr.arg, values))
    if t is GFloor:
        return Fraction(math.floor(evaluate_numeric(expr.arg, values)))
    if t is GCeil:
        return Fraction(math.ceil(evaluate_numeric(expr.arg, values)))
    if t is GMax:
        return max(evaluate_numeric(a, values) for a in expr.args)
    if t is GMin:
        return min(evaluate_numeric(a, values) for a in expr.args)
    if t is GIndicator:
        r = expr.rel
        ok = compare(r.op, evaluate_numeric(r.lhs, values), evaluate_numeric(r.rhs, values))
        return Fraction(1 if ok else 0)
    raise TypeError(f"cannot evaluate {t.__name__}")


def in_domain(x: Fraction, domain, values) -> bool:
    if isinstance(domain, IntegerRange):
        return (x.denominator == 1 and (domain.lo is None or x >= domain.lo)
                and (domain.hi is None or x <= domain.hi))
    if isinstance(domain, RealRange):
        if domain.lo is not None and (x < domain.lo or (domain.lo_open and x == domain.lo)):
            return False
        if domain.hi is not None and (x > domain.hi or (domain.hi_open and x == domain.hi)):
            return False
        return True
    if isinstance(domain, Enumeration):
        return any(x == evaluate_numeric(v, values) for v in domain.values)
    raise TypeError(f"unknown domain {type(domain).__name__}")


@dataclass
class Verdict:
    origin: str
    text: str
    satisfied: bool
    lhs: Fraction | None = None
    rhs: Fraction | None = None


@dataclass
class FeasibilityReport:
    verdicts: list = field(default_factory=list)
    objective: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return all(v.satisfied for v in self.verdicts)

    @property
    def violated(self) -> list:
        return [v for v in self.verdicts if not v.satisfied]


def _describe(c) -> str:
    from .grounder.printer import ground_to_text
    if isinstance(c, RelationConstraint):
        return f"{ground_to_text(c.lhs)} {c.op} {ground_to_text(c.rhs)}"
    return f"{ground_to_text(c.target)} in {ground_to_text(c.domain)}"


def complete_values(model: GroundModel, values) -> dict:
    """Key values by GVar and derive division auxiliaries the caller left out."""
    out = {}
    for v, _ in model.decision_vars:
        if v in values:
            out[v] = Fraction(values[v])
        elif v.name in values:
            out[v] = Fraction(values[v.name])
    for t, (num, den) in getattr(model, "aux_defs", {}).items():
        if t not in out:
            try:
                d = evaluate_numeric(den, out)
                if d != 0:
                    out[t] = evaluate_numeric(num, out) / d
            except MissingValue:
                pass
    return out


def check_feasibility(model: GroundModel, values) -> FeasibilityReport:
    """Evaluate every constraint exactly; the objective is evaluated regardless."""
    vals = complete_values(model, values)
    for v, _ in model.decision_vars:
        if v not in vals:
            raise MissingValue(v.name)
    rep = FeasibilityReport()
    for origin in model.contradictions:
        rep.verdicts.append(Verdict(origin, "constant constraint is false", False))
    for c in model.constraints:
        if isinstance(c, RelationConstraint):
            a = evaluate_numeric(c.lhs, vals)
            b = evaluate_numeric(c.rhs, vals)
            rep.verdicts.append(Verdict(c.origin, _describe(c), compare(c.op, a, b), a, b))
        else:
            x = evaluate_numeric(c.target, vals)
            rep.verdicts.append(Verdict(c.origin, _describe(c), in_domain(x, c.domain, vals), x))
    rep.objective = evaluate_numeric(model.objective, vals)
    return rep


def _satisfies(model: GroundModel, vals) -> bool:
    for c in model.constraints:
        if isinstance(c, RelationConstraint):
            if not compare(c.op, evaluate_numeric(c.lhs, vals), evaluate_numeric(c.rhs, vals)):
                return False
        elif not in_domain(evaluate_numeric(c.target, vals), c.domain, vals):
            return False
    return True


@dataclass
class BruteForceResult:
    feasible: bool
    value: Fraction | None = None
    values: dict | None = None
    points: int = 0


def _bounds(domains):
    """Tightest closed outer bounds implied by the range records."""
    lo = hi = None
    for d in domains:
        if isinstance(d, (IntegerRange, RealRange)):
            if d.lo is not None and (lo is None or d.lo > lo):
                lo = Fraction(d.lo)
            if d.hi is not None and (hi is None or d.hi < hi):
                hi = Fraction(d.hi)
    return lo, hi


def candidate_values(model: GroundModel, var: GVar, width: BitWidth | None,
                     limit: int = SEARCH_LIMIT) -> list:
    """Finite candidate set for ``var``: its domains intersected with the grid."""
    domains = model.domains_of(var)
    consts = [d for d in domains if isinstance(d, Enumeration)
              and all(isinstance(x, GConst) for x in d.values)]
    if consts:
        base = sorted({x.value for x in consts[0].values})
    else:
        lo, hi = _bounds(domains)
        integral = any(isinstance(d, IntegerRange) for d in domains)
        if width is None:
            if lo is None or hi is None or not integral:
                raise SearchSpaceTooLarge(f"{var.name} has no finite domain; a width is needed")
            step = 1
        else:
            step = 1 if integral else 2 ** width.m
            top = width.max_value
            lo = -top if lo is None else max(lo, -top)
            hi = top if hi is None else min(hi, top)
        lo_i, hi_i = math.ceil(lo * step), math.floor(hi * step)
        if hi_i - lo_i + 1 > limit:
            raise SearchSpaceTooLarge(
                f"{var.name} alone has {hi_i - lo_i + 1} candidate values (limit {limit})")
        base = [Fraction(k, step) for k in range(lo_i, hi_i + 1)]
    if width is not None:
        base = [x for x in base if width.representable(x)]
    plain = [d for d in domains if not (isinstance(d, Enumeration)
                                        and not all(isinstance(x, GConst) for x in d.values))]
    return [x for x in base if all(in_domain(x, d, {}) for d in plain)]


def brute_force_optimum(model: GroundModel, width: BitWidth | None = None,
                        limit: int = SEARCH_LIMIT) -> BruteForceResult:
    """Exhaustive optimum over the (discretized) search space."""
    if model.contradictions:
        return BruteForceResult(False)
    variables = [v for v, _ in model.decision_vars]
    cands = [candidate_values(model, v, width, limit) for v in variables]
    size = math.prod(len(c) for c in cands) if cands else 1
    if size > limit:
        raise SearchSpaceTooLarge(f"search space has {size} points (limit {limit})")
    best = None
    best_vals = None
    sign = 1 if model.direction == "max" else -1
    points = 0
    for combo in itertools.product(*cands):
        points += 1
        vals = dict(zip(variables, combo))
        try:
            if not _satisfies(model, vals):
                continue
            obj = evaluate_numeric(model.objective, vals)
        except EvalDivisionByZero:
            continue
        if best is None or sign * obj > sign * best:
            best, best_vals = obj, vals
    if best is None:
        return BruteForceResult(False, points=points)
    return BruteForceResult(True, best, best_vals, points)


@dataclass
class Decoded:
    values: dict                   # GVar -> Fraction
    report: FeasibilityReport
    word_objective: Fraction       # v(u) of the objective root word


def decode_solution(reduction, assignment, model: GroundModel) -> Decoded:
    """Decode every decision variable's word and check the result exactly."""
    values = {v: decode_word(w, assignment) for v, w in reduction.words.items()}
    report = check_feasibility(model, values)
    return Decoded(values, report, decode_word(reduction.objective.u, assignment))
