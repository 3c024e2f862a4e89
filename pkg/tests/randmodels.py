"""Random tiny integer models for oracle tests (at most 4 variables, domains of at most 8 values)."""

from __future__ import annotations

import random

REL = ["=", r"\neq", "<", r"\le", ">", r"\ge"]
BOUND = 100       # largest magnitude any subexpression may reach


class Gen:
    def __init__(self, seed: int):
        self.r = random.Random(seed)
        self.nvars = self.r.randint(1, 4)
        self.domains = []
        for _ in range(self.nvars):
            if self.r.random() < 0.5:
                lo = self.r.randint(-3, 2)
                hi = lo + self.r.randint(0, 7)
                self.domains.append((f"\\{{{lo}, \\dots, {hi}\\}}", max(abs(lo), abs(hi))))
            else:
                vals = sorted(self.r.sample(range(-4, 5), self.r.randint(1, 4)))
                self.domains.append(("\\{" + ", ".join(map(str, vals)) + "\\}",
                                     max(abs(v) for v in vals)))

    def leaf(self):
        if self.r.random() < 0.7:
            i = self.r.randrange(self.nvars)
            return f"x_{{{i + 1}}}", self.domains[i][1]
        c = self.r.randint(-3, 3)
        return (f"({c})" if c < 0 else str(c)), abs(c)

    def expr(self, depth: int):
        for _ in range(50):
            text, bound = self._expr(depth)
            if bound <= BOUND:
                return text, bound
        return self.leaf()

    def _expr(self, depth):
        if depth == 0 or self.r.random() < 0.3:
            return self.leaf()
        kind = self.r.choice(["add", "sub", "mul", "scale", "pow", "abs", "max", "min",
                              "floor", "ceil", "ind"])
        a, ba = self.expr(depth - 1)
        if kind in ("add", "sub", "mul", "max", "min", "ind"):
            b, bb = self.expr(depth - 1)
        if kind == "add":
            return f"{a} + {b}", ba + bb
        if kind == "sub":
            return f"{a} - ({b})", ba + bb
        if kind == "mul":
            return f"({a}) \\cdot ({b})", ba * bb
        if kind == "scale":
            k = self.r.choice([2, 3, -2])
            return f"{k if k > 0 else f'({k})'} ({a})", abs(k) * ba
        if kind == "pow":
            return f"({a})^2", ba * ba
        if kind == "abs":
            return f"|{a}|", ba
        if kind in ("max", "min"):
            return f"\\{kind}\\{{{a}, {b}\\}}", max(ba, bb)
        if kind in ("floor", "ceil"):
            lo, hi = ("\\lfloor", "\\rfloor") if kind == "floor" else ("\\lceil", "\\rceil")
            return f"{lo} \\frac{{{a}}}{{2}} {hi}", ba
        op = self.r.choice(REL)
        return f"\\mathbb{{I}}({a} {op} {b})", 1

    def model(self) -> str:
        direction = self.r.choice(["min", "max"])
        obj, _ = self.expr(2)
        rows = [f"\\{direction} && {obj}"]
        for _ in range(self.r.randint(0, 3)):
            a, _ = self.expr(2)
            b, _ = self.expr(1)
            rows.append(f"&& {a} {self.r.choice(REL)} {b}")
        for i, (dom, _) in enumerate(self.domains):
            rows.append(f"&& x_{{{i + 1}}} \\in {dom}")
        rows[1] = "s.t. " + rows[1] if len(rows) > 1 else rows[0]
        return "\\begin{align}\n" + " \\\\\n".join(rows) + "\n\\end{align}\n"


def random_model(seed: int) -> str:
    return Gen(seed).model()
