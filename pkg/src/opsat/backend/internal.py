"""Complete MaxSAT search for unit soft clauses by most-significant-first fixing.

Soft literals are visited in decreasing weight.  Each is fixed true when the
hard clauses plus the previous fixings allow it and false otherwise.  When
every weight exceeds the sum of all lighter ones (distinct powers of two, as
the objective encoding produces) this lexicographic order is the weight
order, and the result is optimal.  For any other weights the satisfied weight
is first summed by a binary adder circuit whose output bits are then fixed
the same way.
"""

from __future__ import annotations

import time

from ..errors import NonUnitSoft
from .instance import OPTIMUM, TIMEOUT, UNSATISFIABLE, MaxSatInstance, SolverResult
from .sat import make_solver


def superincreasing(weights) -> bool:
    """True if each weight exceeds the sum of all smaller ones."""
    total = 0
    for w in sorted(weights):
        if w <= total:
            return False
        total += w
    return True


class _Circuit:
    """Tseitin-encoded binary arithmetic on solver literals; ``None`` is constant 0."""

    def __init__(self, solver):
        self.s = solver

    def _var(self) -> int:
        return self.s.new_var()

    def xor3(self, a, b, c):
        ins = [x for x in (a, b, c) if x is not None]
        if not ins:
            return None
        if len(ins) == 1:
            return ins[0]
        z = self._var()
        add = self.s.add_clause
        if len(ins) == 2:
            x, y = ins
            add([-z, x, y]); add([-z, -x, -y]); add([z, -x, y]); add([z, x, -y])
            return z
        x, y, w = ins
        for sx in (1, -1):
            for sy in (1, -1):
                for sw in (1, -1):
                    odd = (sx > 0) + (sy > 0) + (sw > 0)
                    # clause excludes the assignment x=sx, y=sy, w=sw with the wrong z
                    add([-sx * x, -sy * y, -sw * w, z if odd % 2 else -z])
        return z

    def maj(self, a, b, c):
        ins = [x for x in (a, b, c) if x is not None]
        if len(ins) < 2:
            return None
        z = self._var()
        add = self.s.add_clause
        if len(ins) == 2:
            x, y = ins
            add([-z, x]); add([-z, y]); add([z, -x, -y])
            return z
        x, y, w = ins
        add([-z, x, y]); add([-z, x, w]); add([-z, y, w])
        add([z, -x, -y]); add([z, -x, -w]); add([z, -y, -w])
        return z

    def add(self, xs: list, ys: list) -> list:
        n = max(len(xs), len(ys))
        xs = xs + [None] * (n - len(xs))
        ys = ys + [None] * (n - len(ys))
        out, carry = [], None
        for a, b in zip(xs, ys):
            out.append(self.xor3(a, b, carry))
            carry = self.maj(a, b, carry)
        out.append(carry)
        while out and out[-1] is None:
            out.pop()
        return out

    def weighted(self, lit: int, weight: int) -> list:
        return [lit if (weight >> i) & 1 else None for i in range(weight.bit_length())]

    def total(self, items) -> list:
        terms = [self.weighted(l, w) for l, w in items]
        if not terms:
            return []
        while len(terms) > 1:
            nxt = [self.add(terms[i], terms[i + 1]) for i in range(0, len(terms) - 1, 2)]
            if len(terms) % 2:
                nxt.append(terms[-1])
            terms = nxt
        return terms[0]


def solve_internal(instance: MaxSatInstance, time_limit: float | None = None,
                   branching: str = "vsids", core: str | None = None) -> SolverResult:
    """Exact optimum of an instance whose soft clauses are all unit literals."""
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    for clause, _ in instance.soft:
        if len(clause) != 1:
            raise NonUnitSoft(f"soft clause {list(clause)} is not a unit literal")
    solver = make_solver(instance.variable_count, branching=branching, core=core)
    name = f"internal-{branching}"

    def finish(status, model):
        res = SolverResult(status, solver=name, wall_time=time.monotonic() - start)
        if model is not None:
            res.assignment = model[: instance.variable_count + 1]
            res.cost = instance.cost(res.assignment)
        return res

    def remaining():
        return None if deadline is None else max(0.0, deadline - time.monotonic())

    for clause in instance.hard:
        if not solver.add_clause(clause):
            return finish(UNSATISFIABLE, None)
    verdict = solver.solve(time_limit=remaining())
    if verdict is None:
        return finish(TIMEOUT, None)
    if verdict is False:
        return finish(UNSATISFIABLE, None)
    model = solver.model()

    merged: dict[int, int] = {}
    for (lit,), w in instance.soft:
        merged[lit] = merged.get(lit, 0) + w
    items = [(l, w) for l, w in merged.items() if w > 0]
    if superincreasing([w for _, w in items]):
        order = [l for l, _ in sorted(items, key=lambda t: (-t[1], abs(t[0])))]
    else:
        bits = _Circuit(solver).total(items)
        order = [b for b in reversed(bits) if b is not None]
        solver.solve(time_limit=remaining())  # circuit variables need model entries
        model = solver.model() or model

    for lit in order:
        if _holds(model, lit):
            solver.add_clause([lit])
            continue
        verdict = solver.solve([lit], time_limit=remaining())
        if verdict is None:
            return finish(TIMEOUT, model)
        if verdict:
            model = solver.model()
            solver.add_clause([lit])
        else:
            solver.add_clause([-lit])
    return finish(OPTIMUM, model)


def _holds(model, lit) -> bool:
    v = abs(lit)
    return v < len(model) and bool(model[v]) == (lit > 0)
