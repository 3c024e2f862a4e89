"""Rule conformance: raw sizes against closed forms, and exhaustive semantics.

Sizes are measured on words of fresh variables so no constant-bit
simplification can hide a clause.  Semantics are checked by projecting the
satisfying assignments of a rule's clauses onto its pins and comparing, for
every input pattern, the set of reachable output values with the reference
relation in :mod:`opsat.encoder.reference`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..codec import BitWidth, encode_constant
from . import counts, reference, rules
from .emitter import CORRECTED, PUBLISHED, Emitter

GRID = [(n, m) for n in (1, 2, 3) for m in (0, 1, 2)]
SEMANTIC_GRID = [(2, 0), (2, 1), (1, 2)]
POWER_EXPONENTS = (-2, -1, 0, 1, 2, 3, 4)


@dataclass(frozen=True)
class CountCase:
    rule: str
    n: int
    m: int
    params: tuple = ()

    def label(self) -> str:
        extra = f" {self.params}" if self.params else ""
        return f"{self.rule} (n={self.n}, m={self.m}){extra}"


@dataclass
class CountResult:
    case: CountCase
    expected: tuple
    actual: tuple

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _emit(em: Emitter, rule: str, w: BitWidth, params: tuple):
    """Allocate pins for ``rule`` and emit it, measuring only the rule."""
    F = em.fresh_word
    if rule == "FullAdder":
        pins = em.fresh_many(5)
        with em.measure(rule):
            rules.full_adder(em, *pins)
        return
    if rule == "HalfAdder":
        pins = em.fresh_many(4)
        with em.measure(rule):
            rules.half_adder(em, *pins)
        return
    binary = {
        "Complement": rules.complement,
        "Equal": rules.equal,
        "NotEqual": rules.not_equal,
        "LessThan": rules.less_than,
        "LessEqual": rules.less_equal,
        "Absolute": rules.absolute,
        "Floor": rules.floor_rule,
        "Ceil": rules.ceil_rule,
        "Normalization": rules.normalization,
    }
    if rule in binary:
        a, b = F(w), F(w)
        with em.measure(rule):
            binary[rule](em, a, b)
        return
    if rule in ("Adder", "Multiplier"):
        a, b, c = F(w), F(w), F(w)
        fn = rules.adder if rule == "Adder" else rules.multiplier
        with em.measure(rule):
            fn(em, a, b, c)
        return
    kary = {
        "MultiAdder": rules.multi_adder,
        "Sum": rules.sum_rule,
        "Product": rules.product,
        "Max": rules.max_rule,
        "Min": rules.min_rule,
    }
    if rule in kary:
        (k,) = params
        ops = [F(w) for _ in range(k)]
        c = F(w)
        with em.measure(rule):
            kary[rule](em, ops, c)
        return
    if rule == "Power":
        (k,) = params
        a, c = F(w), F(w)
        with em.measure(rule):
            rules.power(em, a, k, c)
        return
    if rule == "EnumerationDomain":
        (k,) = params
        a = F(w)
        ops = [F(w) for _ in range(k)]
        with em.measure(rule):
            rules.enumeration_domain(em, a, ops)
        return
    if rule == "IntegerDomain":
        a = F(w)
        with em.measure(rule):
            rules.integer_domain(em, a, *params)
        return
    if rule == "RealDomain":
        a = F(w)
        with em.measure(rule):
            rules.real_domain(em, a, *params)
        return
    raise KeyError(rule)


def measure(rule: str, n: int, m: int, params: tuple = (), fixes=PUBLISHED) -> tuple:
    em = Emitter(fixes=fixes)
    _emit(em, rule, BitWidth(n, m), params)
    st = em.rule_stats[rule]
    return st.aux, st.clauses


def integer_domain_case(n: int) -> tuple:
    """Bounds that make the closed form's comparator terms applicable."""
    if n == 1:
        return (0, 1)
    h = 2 ** (n - 1)
    return (-h, h)


def real_domain_case(n: int) -> tuple:
    if n == 1:
        return (-1, 1, None, None)
    return (-2, 2, -3, 3)


def count_cases() -> list[CountCase]:
    out = []
    for n, m in GRID:
        for rule in ("FullAdder", "HalfAdder", "Complement", "Adder", "Equal", "NotEqual",
                     "LessThan", "LessEqual", "Multiplier", "Absolute", "Floor", "Ceil",
                     "Normalization"):
            out.append(CountCase(rule, n, m))
        for rule in ("MultiAdder", "Sum", "Product", "Max", "Min", "EnumerationDomain"):
            for k in (2, 3, 4):
                out.append(CountCase(rule, n, m, (k,)))
        for k in POWER_EXPONENTS:
            out.append(CountCase("Power", n, m, (k,)))
        out.append(CountCase("IntegerDomain", n, m, integer_domain_case(n)))
        out.append(CountCase("RealDomain", n, m, real_domain_case(n)))
    return out


def _closed_form(case: CountCase) -> tuple:
    fn = counts.CLOSED_FORMS[case.rule]
    params = case.params
    if case.rule == "RealDomain":
        n = case.n
        L1, R1, L2, R2 = params
        big = 2 ** n
        params = (L1, R1, -big if L2 is None else L2, big if R2 is None else R2)
    return fn(case.n, case.m, *params)


def check_counts(cases=None, fixes=PUBLISHED) -> list[CountResult]:
    cases = count_cases() if cases is None else cases
    return [CountResult(c, _closed_form(c), measure(c.rule, c.n, c.m, c.params, fixes))
            for c in cases]


# -- semantics -----------------------------------------------------------------

@dataclass
class SemanticResult:
    rule: str
    n: int
    m: int
    params: tuple
    fixes: frozenset
    mismatches: list = field(default_factory=list)
    checked: int = 0
    failures: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _patterns(width: BitWidth):
    return itertools.product((0, 1), repeat=width.size)


def _assume(word, pattern):
    return [v if bit else -v for v, bit in zip(word.bits, pattern)]


def check_semantics(rule: str, n: int, m: int, params: tuple = (), fixes=CORRECTED,
                    max_mismatches: int = 20) -> SemanticResult:
    """Compare the rule's projected relation with the reference relation.

    For operation rules every input bit pattern is fixed by assumptions and
    the reachable output values are enumerated with blocking clauses.  For
    domain rules the set of reachable values of the constrained word is
    compared with the reference value set (two encodings of zero count once).
    """
    from ..backend.enumerate import project_values

    w = BitWidth(n, m)
    em = Emitter(fixes=fixes)
    res = SemanticResult(rule, n, m, params, frozenset(fixes))
    F = em.fresh_word

    if rule in reference.DOMAIN_RULES:
        a = F(w)
        if rule == "EnumerationDomain":
            options = [encode_constant(v, w) for v in params]
            rules.enumeration_domain(em, a, options)
        elif rule == "IntegerDomain":
            rules.integer_domain(em, a, *params)
        else:
            rules.real_domain(em, a, *params)
        clauses = em.finish()
        got = project_values(clauses, em.registry.variable_count, [], [a])
        got = {vals[0] for vals in got.get((), set())}
        want = reference.domain_values(rule, w, params)
        res.checked = 1
        if got != want:
            res.failures = 1
            res.mismatches.append(("values", sorted(got - want), sorted(want - got)))
        return res

    if rule in reference.RELATION_RULES:
        a, b = F(w), F(w)
        rules.emit_relation(em, reference.RELATION_RULES[rule], a, b)
        inputs, outputs = [a, b], []
    elif rule in ("FullAdder", "HalfAdder"):
        return _check_bit_adder(rule, fixes)
    elif rule in reference.KARY_RULES:
        (k,) = params
        ins = [F(w) for _ in range(k)]
        c = F(w)
        reference.KARY_RULES[rule](em, ins, c)
        inputs, outputs = ins, [c]
    elif rule == "Adder" or rule == "MultiAdder" or rule == "Complement" or rule == "Normalization":
        return _check_twos(rule, w, params, fixes, max_mismatches)
    elif rule == "Multiplier":
        a, b, c = F(w), F(w), F(w)
        rules.multiplier(em, a, b, c)
        inputs, outputs = [a, b], [c]
    elif rule == "Power":
        (k,) = params
        a, c = F(w), F(w)
        rules.power(em, a, k, c)
        inputs, outputs = [a], [c]
    elif rule in reference.UNARY_RULES:
        a, c = F(w), F(w)
        reference.UNARY_RULES[rule][0](em, a, c)
        inputs, outputs = [a], [c]
    elif rule.startswith("Indicator"):
        op = params[0]
        a, b = F(w), F(w)
        r = em.fresh()
        rules.indicator(em, op, a, b, r)
        inputs, outputs = [a, b], [r]
    else:
        raise KeyError(rule)

    clauses = em.finish()
    got = project_values(clauses, em.registry.variable_count, inputs, outputs)
    for pattern in itertools.product(*[list(_patterns(w)) for _ in inputs]):
        values = tuple(reference.pattern_value(p, w) for p in pattern)
        want = reference.expected_outputs(rule, w, params, pattern, values)
        have = got.get(tuple(pattern), set())
        res.checked += 1
        if have != want:
            res.failures += 1
            if len(res.mismatches) < max_mismatches:
                res.mismatches.append((values, sorted(have), sorted(want)))
    return res


def _check_bit_adder(rule: str, fixes) -> SemanticResult:
    from ..backend.enumerate import sat_enumerate

    em = Emitter(fixes=fixes)
    k = 5 if rule == "FullAdder" else 4
    pins = em.fresh_many(k)
    (rules.full_adder if rule == "FullAdder" else rules.half_adder)(em, *pins)
    got = sat_enumerate(em.finish(), pins)
    want = set()
    nin = k - 2
    for bits in itertools.product((0, 1), repeat=nin):
        s = sum(bits)
        want.add(tuple(bits) + (s & 1, s >> 1))
    res = SemanticResult(rule, 0, 0, (), frozenset(fixes), checked=2 ** nin)
    if got != want:
        res.failures = 1
        res.mismatches.append(("truth table", sorted(got - want), sorted(want - got)))
    return res


def _check_twos(rule, w, params, fixes, max_mismatches) -> SemanticResult:
    """Rules whose pins live in two's complement (or offset) form."""
    from ..backend.enumerate import project_patterns

    em = Emitter(fixes=fixes)
    F = em.fresh_word
    res = SemanticResult(rule, w.n, w.m, params, frozenset(fixes))
    if rule == "Complement" or rule == "Normalization":
        a, c = F(w), F(w)
        (rules.complement if rule == "Complement" else rules.normalization)(em, a, c)
        inputs, outputs = [a], [c]
    elif rule == "Adder":
        a, b, c = F(w), F(w), F(w)
        rules.adder(em, a, b, c)
        inputs, outputs = [a, b], [c]
    else:
        (k,) = params
        ins = [F(w) for _ in range(k)]
        c = F(w)
        rules.multi_adder(em, ins, c)
        inputs, outputs = ins, [c]
    got = project_patterns(em.finish(), em.registry.variable_count, inputs, outputs)
    for pattern in itertools.product(*[list(_patterns(w)) for _ in inputs]):
        want = reference.twos_outputs(rule, w, pattern)
        have = got.get(tuple(pattern), set())
        res.checked += 1
        if have != want:
            res.failures += 1
            if len(res.mismatches) < max_mismatches:
                res.mismatches.append((pattern, sorted(have), sorted(want)))
    return res


def semantic_cases() -> list[tuple]:
    out = []
    for n, m in SEMANTIC_GRID:
        for rule in ("FullAdder", "HalfAdder") if (n, m) == SEMANTIC_GRID[0] else ():
            out.append((rule, n, m, ()))
        for rule in ("Complement", "Adder", "Equal", "NotEqual", "LessThan", "LessEqual",
                     "Multiplier", "Absolute", "Floor", "Ceil", "Normalization"):
            out.append((rule, n, m, ()))
        for rule in ("MultiAdder", "Sum", "Product", "Max", "Min"):
            out.append((rule, n, m, (2,)))
        out.append(("MultiAdder", n, m, (3,)))
        out.append(("Sum", n, m, (3,)))
        for k in (-2, -1, 0, 1, 2, 3):
            out.append(("Power", n, m, (k,)))
        for op in ("=", "!=", "<", "<="):
            out.append(("Indicator", n, m, (op,)))
        top = 2 ** n - 1
        out.append(("IntegerDomain", n, m, (0, 1)))
        out.append(("IntegerDomain", n, m, (-top, top)))
        out.append(("IntegerDomain", n, m, (-1, top)))
        if n >= 2:
            out.append(("IntegerDomain", n, m, (-(2 ** (n - 1)) + 1, 2 ** (n - 1))))
            out.append(("IntegerDomain", n, m, (1, 2)))
        out.append(("RealDomain", n, m, (-1, 1, None, None)))
        out.append(("RealDomain", n, m, (None, None, -1, 1)))
        out.append(("RealDomain", n, m, (0, None, None, None)))
        out.append(("RealDomain", n, m, (None, None, 0, None)))
        if n >= 2:
            out.append(("RealDomain", n, m, (-2, 2, None, None)))
            out.append(("RealDomain", n, m, (None, 2, -2, None)))
        out.append(("EnumerationDomain", n, m, (Fraction(0), Fraction(1))))
        out.append(("EnumerationDomain", n, m, (Fraction(-1), Fraction(1), Fraction(0))))
    return out


def format_report(count_results, semantic_pairs) -> str:
    """Text table ``rule, (n,m), aux expected/actual, clauses expected/actual, semantics``.

    ``semantic_pairs`` maps ``(rule, n, m)`` to a verdict string.
    """
    lines = ["rule, (n,m), aux_vars expected/actual, clauses expected/actual, semantics"]
    for r in count_results:
        c = r.case
        verdict = semantic_pairs.get((c.rule, c.n, c.m), "-")
        extra = f" {list(c.params)}" if c.params else ""
        lines.append(
            f"{c.rule}{extra}, ({c.n},{c.m}), {r.expected[0]}/{r.actual[0]}, "
            f"{r.expected[1]}/{r.actual[1]}, {verdict}"
        )
    return "\n".join(lines) + "\n"


def rule_verdict(rule: str, n: int, m: int, params: tuple = ()) -> str:
    """PASS, DEVIATION (published fails, corrected passes) or FAIL."""
    pub = check_semantics(rule, n, m, params, fixes=PUBLISHED)
    if pub.ok:
        return "PASS"
    cor = check_semantics(rule, n, m, params, fixes=CORRECTED)
    return "DEVIATION" if cor.ok else "FAIL"
