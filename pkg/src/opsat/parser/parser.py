"""Recursive-descent parser for models and instance-data files.

Alternatives that share a prefix (condition shapes, ranged versus
condition binders, objective versus constraint) are tried in order with
backtracking; when all fail, the error that got furthest is reported.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DuplicateAssignment, MissingObjective, ModelSyntaxError, MultipleObjectives
from . import ast as A
from .lexer import COMMAND, DIGITS, EOF, GREEK, LETTER, Token, tokenize

DOTS = ("...", "\\dots", "\\cdots", "\\ldots")
REL_OPS = {
    "=": A.EQ, "\\neq": A.NE, "\\ne": A.NE, "<": A.LT, "\\le": A.LE, "\\leq": A.LE,
    "\\lt": A.LT, ">": A.GT, "\\ge": A.GE, "\\geq": A.GE, "\\gt": A.GT,
    "\\in": A.IN, "\\notin": A.NOTIN,
    "\\subset": A.SUBSET, "\\subseteq": A.SUBSETEQ, "\\subsetneq": A.SUBSETNEQ,
}
SET_OPS = {"\\cup": "cup", "\\cap": "cap", "\\setminus": "setminus", "\\backslash": "setminus"}
MUL_OPS = ("\\cdot", "\\times", "/")
TERM_STARTS = frozenset({
    "(", "\\mathbb{I}", "\\lfloor", "\\lceil", "\\frac", "\\sum", "\\prod", "\\max", "\\min",
    "\\mathcal", "\\mathbf", "\\boldsymbol",
})
SET_STARTS = frozenset({"\\{", "\\set", "\\emptyset", "\\bigcup", "\\bigcap"})
ALIGN = ("&", "&&")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = list(tokens)
        if not self.toks or self.toks[-1].kind != EOF:
            self.toks.append(Token(EOF, ""))
        self.i = 0
        self.abs_depth = 0
        self.bound: list[set] = [set()]

    # -- token helpers -----------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def at(self, *lexemes) -> bool:
        return self.peek().lexeme in lexemes

    def accept(self, *lexemes) -> Token | None:
        if self.at(*lexemes):
            return self.next()
        return None

    def expect(self, lexeme: str, what: str | None = None) -> Token:
        if not self.at(lexeme):
            self.fail(what or repr(lexeme))
        return self.next()

    def fail(self, expected: str):
        t = self.peek()
        err = ModelSyntaxError(expected, t.lexeme or "end of input", t.span[:2])
        err.position = self.i
        raise err

    def is_rel_op(self) -> bool:
        t = self.peek()
        if t.lexeme in REL_OPS:
            return True
        return t.lexeme == "\\not" and self.peek(1).lexeme == "\\in"

    def alt(self, *alternatives):
        """Try each callable; restore position between tries."""
        start = self.i
        saved_abs = self.abs_depth
        best = None
        for fn in alternatives:
            try:
                return fn()
            except ModelSyntaxError as err:
                if best is None or getattr(err, "position", 0) > getattr(best, "position", 0):
                    best = err
                self.i = start
                self.abs_depth = saved_abs
        raise best

    def skip_align(self) -> None:
        while self.at(*ALIGN):
            self.next()

    def is_bound(self, name: str) -> bool:
        return any(name in scope for scope in self.bound)

    # -- model -------------------------------------------------------------------

    def model(self) -> A.Model:
        self.expect("\\begin{align}")
        objective = None
        constraints = []
        while True:
            self.skip_align()
            if self.accept("\\\\"):
                continue          # blank line
            if self.at("\\end{align}"):
                break
            item = self.item()
            if isinstance(item, A.Objective):
                if objective is not None:
                    raise MultipleObjectives("model has more than one objective", item.span)
                objective = item
            else:
                constraints.append(item)
            self.skip_align()
            if not self.accept("\\\\"):
                if not self.at("\\end{align}"):
                    self.fail("'\\\\' or '\\end{align}'")
        self.expect("\\end{align}")
        if self.peek().kind != EOF:
            self.fail("end of input after \\end{align}")
        if objective is None:
            raise MissingObjective("model has no objective")
        return A.Model(objective, tuple(constraints))

    def item_end(self) -> bool:
        return self.at("\\\\", "\\end{align}") or self.peek().kind == EOF

    def item(self):
        if self.at("\\max", "\\min"):
            return self.alt(self.objective, self.constraint)
        return self.constraint()

    def objective(self) -> A.Objective:
        tok = self.next()
        self.skip_align()
        expr = self.numeric()
        conds = self.trailing_conditions()
        return A.Objective(tok.lexeme[1:], expr, conds, tok.span)

    def constraint(self) -> A.Constraint:
        start = self.peek()
        self.accept("s.t.")
        self.skip_align()
        self.bound.append(set())
        try:
            rel = self.relation()
        finally:
            self.bound.pop()
        conds = self.trailing_conditions()
        return A.Constraint(rel, conds, start.span)

    def trailing_conditions(self) -> tuple:
        self.skip_align()
        if self.item_end():
            return ()
        self.bound.append(set())
        try:
            conds = self.conditions()
        finally:
            self.bound.pop()
        self.skip_align()
        if not self.item_end():
            self.fail("end of line")
        return conds

    # -- conditions ----------------------------------------------------------------------

    def conditions(self) -> tuple:
        out = [self.condition()]
        while self.accept(","):
            out.append(self.condition())
        return tuple(out)

    def condition(self):
        cond = self.alt(self.enum_binder, self.membership, self.relation_condition)
        self._bind(cond)
        return cond

    def _bind(self, cond) -> None:
        scope = self.bound[-1]
        if isinstance(cond, (A.EnumBinder, A.Membership, A.ChainBinder)):
            for v in cond.vars:
                scope.add(v.name)

    def var_list(self) -> tuple:
        out = [self.variable()]
        while self.at(",") and self._starts_variable(1):
            self.next()
            out.append(self.variable())
        return tuple(out)

    def enum_binder(self) -> A.EnumBinder:
        vars_ = self.var_list()
        self.expect("=")
        first = self.numeric()
        self.expect(",")
        if not self.accept(*DOTS):
            self.fail("'\\dots'")
        self.expect(",")
        last = self.numeric()
        return A.EnumBinder(vars_, first, last)

    def membership(self) -> A.Membership:
        forall = bool(self.accept("\\forall"))
        vars_ = self.var_list()
        t = self.peek()
        if t.lexeme not in ("\\in", "\\subset", "\\subseteq", "\\subsetneq"):
            self.fail("'\\in' or a subset operator")
        self.next()
        s = self.set_expression()
        return A.Membership(vars_, s, REL_OPS[t.lexeme], forall)

    def relation_condition(self):
        rel = self.relation()
        ops, xs = rel.ops, rel.operands
        if (len(xs) >= 3 and all(op in (A.LT, A.LE) for op in ops)
                and all(isinstance(x, A.VarRef) and not x.subs and not self.is_bound(x.name)
                        for x in xs[1:-1])):
            return A.ChainBinder(xs[0], tuple(xs[1:-1]), ops, xs[-1])
        return A.RelCondition(rel)

    # -- relations ---------------------------------------------------------------------------

    def rel_op(self) -> str:
        if self.at("\\not"):
            self.next()
            self.expect("\\in")
            return A.NOTIN
        return REL_OPS[self.next().lexeme]

    def operand(self):
        """A numeric or set operand of a relation."""
        if self.at(*SET_STARTS) or self.peek().lexeme.startswith("\\mathbb{") and self.peek().lexeme != "\\mathbb{I}":
            return self.set_expression()
        start = self.i
        expr = self.alt(self.numeric, self.set_expression)
        if self.at(*SET_OPS) and isinstance(expr, A.VarRef):
            self.i = start
            return self.set_expression()
        return expr

    def relation(self) -> A.Relation:
        start = self.peek()
        first = self.operand()
        if not self.is_rel_op():
            self.fail("a relation operator")
        ops, operands = [], [first]
        while self.is_rel_op():
            op = self.rel_op()
            if op in (A.IN, A.NOTIN, A.SUBSET, A.SUBSETEQ, A.SUBSETNEQ):
                operands.append(self.set_expression())
            else:
                operands.append(self.operand())
            ops.append(op)
        if any(A.is_set_node(x) for x in operands) and all(op in (A.EQ, A.NE) for op in ops):
            operands = [A.SetVar(x, x.span) if isinstance(x, A.VarRef) else x for x in operands]
        return A.Relation(tuple(ops), tuple(operands), start.span)

    # -- numeric expressions --------------------------------------------------------------------

    def numeric(self):
        start = self.peek()
        signs = [1]
        if self.accept("-"):
            signs[0] = -1
        terms = [self.product()]
        while self.at("+", "-"):
            signs.append(1 if self.next().lexeme == "+" else -1)
            terms.append(self.product())
        if len(terms) == 1:
            return terms[0] if signs[0] == 1 else A.Neg(terms[0], start.span)
        return A.Terms(tuple(terms), tuple(signs), start.span)

    def starts_term(self) -> bool:
        t = self.peek()
        if t.kind in (LETTER, DIGITS):
            return True
        if t.lexeme in ("|", "\\vert"):
            return self.abs_depth == 0
        if t.kind == COMMAND and t.lexeme[1:] in GREEK:
            return True
        return t.lexeme in TERM_STARTS

    def product(self):
        start = self.peek()
        factors = [self.factor()]
        ops = [""]
        while True:
            if self.at(*MUL_OPS):
                ops.append(self.next().lexeme)
                factors.append(self.factor())
            elif self.starts_term():
                ops.append("")
                factors.append(self.factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return A.Factors(tuple(factors), tuple(ops), start.span)

    def braced_or_one_token(self):
        if self.accept("{"):
            e = self.numeric()
            self.expect("}")
            return e
        return self.one_token()

    def one_token(self):
        t = self.peek()
        if t.kind == DIGITS:
            if len(t.lexeme) > 1:
                if not t.lexeme.isdigit():
                    self.fail("a single digit")
                line, col, _ = t.span
                self.toks[self.i:self.i + 1] = [
                    Token(DIGITS, t.lexeme[0], (line, col, 1)),
                    Token(DIGITS, t.lexeme[1:], (line, col + 1, len(t.lexeme) - 1)),
                ]
                t = self.peek()
            self.next()
            return A.Const(Fraction(t.lexeme), t.lexeme, t.span)
        name, span = self.variable_term()
        return A.VarRef(name, (), span)

    def factor(self):
        t = self.peek()
        if t.lexeme == "\\frac":
            self.next()
            self.expect("{")
            num = self.numeric()
            self.expect("}")
            den = self.braced_or_one_token()
            return A.Frac(num, den, t.span)
        if t.lexeme in ("\\sum", "\\prod"):
            self.next()
            binder = self.binder()
            body = self.product()
            self.bound.pop()
            return A.BigOp(t.lexeme[1:], binder, body, t.span)
        if t.lexeme in ("\\max", "\\min"):
            self.next()
            kind = t.lexeme[1:]
            if self.at("_"):
                binder = self.binder()
                try:
                    if self.accept("\\{"):
                        body = self.numeric()
                        self.expect("\\}")
                    else:
                        self.expect("\\set", "'\\{' or '\\set'")
                        self.expect("{")
                        body = self.numeric()
                        self.expect("}")
                finally:
                    self.bound.pop()
                return A.Extremum(kind, binder=binder, body=body, span=t.span)
            return A.Extremum(kind, over=self.set_expression(), span=t.span)
        base = self.atom()
        if self.accept("^"):
            exp = self.braced_or_one_token()
            return A.Power(base, exp, t.span)
        return base

    def binder(self):
        """Parse ``_{...}[^{...}]``; pushes a binding scope the caller pops."""
        self.expect("_")
        self.expect("{")
        start = self.i
        self.bound.append(set())

        def ranged():
            var = self.variable()
            self.expect("=")
            lower = self.numeric()
            self.bound[-1].add(var.name)
            conds = ()
            if self.accept(","):
                conds = self.conditions()
            self.expect("}")
            self.expect("^", "'^' after a ranged binder")
            upper = self.braced_or_one_token()
            return A.RangeBinder(var, lower, upper, conds)

        def conditional():
            self.bound[-1].clear()
            conds = self.conditions()
            self.expect("}")
            return A.CondBinder(conds)

        try:
            return self.alt(ranged, conditional)
        except ModelSyntaxError:
            self.i = start
            self.bound.pop()
            raise

    def atom(self):
        t = self.peek()
        if t.kind == DIGITS:
            self.next()
            return A.Const(Fraction(t.lexeme), t.lexeme, t.span)
        if t.lexeme == "(":
            self.next()
            e = self.numeric()
            self.expect(")")
            return e
        if t.lexeme in ("|", "\\vert"):
            self.next()
            self.abs_depth += 1
            try:
                if self.at(*SET_STARTS) or (self.peek().lexeme.startswith("\\mathbb{")
                                            and self.peek().lexeme != "\\mathbb{I}"):
                    arg = self.set_expression()
                else:
                    arg = self.alt(self.numeric, self.set_expression)
            finally:
                self.abs_depth -= 1
            self.expect(t.lexeme, f"closing {t.lexeme!r}")
            return A.Bars(arg, t.lexeme, t.span)
        if t.lexeme == "\\mathbb{I}":
            self.next()
            self.expect("(")
            saved = self.abs_depth
            self.abs_depth = 0
            rel = self.relation()
            self.abs_depth = saved
            self.expect(")")
            return A.Indicator(rel, t.span)
        if t.lexeme == "\\lfloor":
            self.next()
            e = self.numeric()
            self.expect("\\rfloor")
            return A.Floor(e, t.span)
        if t.lexeme == "\\lceil":
            self.next()
            e = self.numeric()
            self.expect("\\rceil")
            return A.Ceil(e, t.span)
        if self._starts_variable(0):
            return self.variable()
        self.fail("a numeric term")

    # -- variables --------------------------------------------------------------------

    def _starts_variable(self, k: int) -> bool:
        t = self.peek(k)
        if t.kind == LETTER:
            return True
        if t.kind == COMMAND:
            return t.lexeme[1:] in GREEK or t.lexeme in ("\\mathcal", "\\mathbf", "\\boldsymbol")
        return False

    def variable_term(self):
        t = self.peek()
        if t.kind == LETTER:
            self.next()
            return t.lexeme, t.span
        if t.kind == COMMAND and t.lexeme[1:] in GREEK:
            self.next()
            return t.lexeme, t.span
        if t.lexeme in ("\\mathcal", "\\mathbf", "\\boldsymbol"):
            self.next()
            self.expect("{")
            inner = self.peek()
            ok = inner.kind == LETTER or (t.lexeme == "\\boldsymbol" and inner.kind == COMMAND
                                          and inner.lexeme[1:] in GREEK)
            if not ok:
                self.fail("a letter")
            self.next()
            self.expect("}")
            return f"{t.lexeme}{{{inner.lexeme}}}", t.span
        self.fail("a variable")

    def variable(self) -> A.VarRef:
        name, span = self.variable_term()
        subs = ()
        if self.accept("_"):
            if self.accept("{"):
                items = [self.numeric()]
                while self.accept(","):
                    items.append(self.numeric())
                self.expect("}")
                subs = tuple(items)
            else:
                subs = (self.one_token(),)
        return A.VarRef(name, subs, span)

    # -- sets ------------------------------------------------------------------------------

    def set_expression(self):
        left = self.set_term()
        while self.at(*SET_OPS):
            t = self.next()
            right = self.set_term()
            left = A.SetOp(SET_OPS[t.lexeme], left, right, t.span)
        return left

    def set_term(self):
        t = self.peek()
        lex = t.lexeme
        if lex.startswith("\\mathbb{") and lex != "\\mathbb{I}":
            self.next()
            letter = lex[8]
            if letter not in "RZN":
                self.fail("a predefined set")
            name = letter
            if letter in "RZ" and self.at("^"):
                self.next()
                braced = bool(self.accept("{"))
                sign = self.accept("+", "-")
                if sign is None:
                    self.fail("'+' or '-'")
                if braced:
                    self.expect("}")
                name += sign.lexeme
            return A.Predefined(name, t.span)
        if lex == "\\emptyset":
            self.next()
            return A.Predefined("empty", t.span)
        if lex == "\\{":
            self.next()
            return self.set_body("\\}", t)
        if lex == "\\set":
            self.next()
            self.expect("{")
            return self.set_body("}", t)
        if lex == "(":
            self.next()
            s = self.set_expression()
            self.expect(")")
            return s
        if lex in ("\\bigcup", "\\bigcap"):
            self.next()
            binder = self.binder()
            try:
                body = self.set_term()
            finally:
                self.bound.pop()
            return A.BigSetOp(lex[1:], binder, body, t.span)
        if self._starts_variable(0):
            ref = self.variable()
            return A.SetVar(ref, ref.span)
        self.fail("a set")

    def set_body(self, close: str, opener: Token):
        first = self.numeric()
        if self.at(",") and self.peek(1).lexeme in DOTS:
            self.next()
            self.next()
            self.expect(",")
            last = self.numeric()
            self.expect(close)
            return A.SetRange(first, last, opener.span)
        items = [first]
        while self.accept(","):
            items.append(self.numeric())
        self.expect(close)
        return A.SetLiteral(tuple(items), opener.span)

    # -- instance data ------------------------------------------------------------------

    def assignment(self) -> A.Assignment:
        target = self.variable()
        self.expect("=")
        if self.at(*SET_STARTS) or (self.peek().lexeme.startswith("\\mathbb{")
                                    and self.peek().lexeme != "\\mathbb{I}"):
            value = self.set_expression()
        else:
            value = self.alt(self._numeric_to_end, self.set_expression)
        self.accept(";")
        if self.peek().kind != EOF:
            self.fail("end of line")
        return A.Assignment(target, value, target.span)

    def _numeric_to_end(self):
        e = self.numeric()
        if not self.at(";") and self.peek().kind != EOF:
            self.fail("end of line")
        return e


def parse_model(tokens) -> A.Model:
    """Parse a token list (or source text) into a :class:`Model`."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    return _Parser(tokens).model()


def parse_expression(source: str):
    p = _Parser(tokenize(source))
    e = p.numeric()
    if p.peek().kind != EOF:
        p.fail("end of input")
    return e


def parse_relation(source: str) -> A.Relation:
    p = _Parser(tokenize(source))
    r = p.relation()
    if p.peek().kind != EOF:
        p.fail("end of input")
    return r


def parse_instance_data(source: str) -> list[A.Assignment]:
    """One ``lhs = rhs`` assignment per non-blank line; ``%`` starts a comment."""
    from .printer import to_latex

    out = []
    seen = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        body = line.split("%", 1)[0]
        if not body.strip():
            continue
        toks = tokenize(body)
        toks = [Token(t.kind, t.lexeme, (lineno, t.span[1], t.span[2])) for t in toks]
        a = _Parser(toks).assignment()
        key = (a.target.name, a.target.subs)
        if key in seen:
            raise DuplicateAssignment(to_latex(a.target), a.span)
        seen[key] = a
        out.append(a)
    return out
