"""Model enumeration and projection on top of the CDCL core."""

from __future__ import annotations

import itertools

from ..codec import FixedPointWord, bit_value, decode_word, is_const
from ..errors import CapExceeded
from .sat import make_solver


def _word_patterns(word: FixedPointWord):
    """All bit patterns (LSB first) a word can take, honouring constant bits."""
    choices = [((1,) if b is True else (0,)) if is_const(b) else (0, 1) for b in word.bits]
    return itertools.product(*choices)


def _pins(outputs) -> list[int]:
    out = []
    for o in outputs:
        bits = o.bits if isinstance(o, FixedPointWord) else (o,)
        out.extend(b for b in bits if not is_const(b))
    return out


def _project(clauses, nvars, inputs, outputs, read, core=None) -> dict:
    solver = make_solver(nvars, core=core)
    for c in clauses:
        solver.add_clause(c)
    pins = sorted(set(_pins(outputs)))
    result = {}
    patterns = itertools.product(*[list(_word_patterns(w)) for w in inputs])
    for combo in patterns:
        assume = []
        for word, pattern in zip(inputs, combo):
            for b, v in zip(word.bits, pattern):
                if not is_const(b):
                    assume.append(b if v else -b)
        act = solver.new_var()
        seen = set()
        while solver.solve(assume + [act]) is True:
            model = solver.model()
            seen.add(tuple(read(o, model) for o in outputs))
            if not pins:
                break
            solver.add_clause([-act] + [-p if model[p] else p for p in pins])
        solver.add_clause([-act])
        if seen:
            result[tuple(combo)] = seen
    return result


def _read_value(o, model):
    if isinstance(o, FixedPointWord):
        return decode_word(o, model)
    return bit_value(o, model)


def _read_pattern(o, model):
    if isinstance(o, FixedPointWord):
        return tuple(bit_value(b, model) for b in o.bits)
    return bit_value(o, model)


def project_values(clauses, nvars: int, inputs, outputs, core=None) -> dict:
    """Map each feasible input pattern to the set of reachable output values.

    ``inputs`` are words whose patterns are enumerated exhaustively;
    ``outputs`` are words (decoded to rationals) or Boolean variables (0/1).
    Input patterns with no model are absent from the result.
    """
    return _project(clauses, nvars, inputs, outputs, _read_value, core)


def project_patterns(clauses, nvars: int, inputs, outputs, core=None) -> dict:
    """Like :func:`project_values` but reports raw output bit patterns."""
    return _project(clauses, nvars, inputs, outputs, _read_pattern, core)


def sat_enumerate(clauses, interest_vars, cap: int = 26, mode: str = "blocking",
                  nvars: int | None = None, core=None) -> set:
    """All assignments to ``interest_vars`` that extend to a model.

    ``blocking`` finds them with blocking clauses; ``exhaustive`` tries every
    assignment under assumptions.  Either mode refuses more than ``cap``
    interest variables.
    """
    interest = list(interest_vars)
    if len(interest) > cap:
        raise CapExceeded(f"{len(interest)} interest variables exceed the cap of {cap}")
    top = max([abs(l) for c in clauses for l in c] + interest + [0])
    solver = make_solver(max(top, nvars or 0), core=core)
    for c in clauses:
        solver.add_clause(c)
    found = set()
    if mode == "exhaustive":
        for bits in itertools.product((0, 1), repeat=len(interest)):
            if solver.solve([v if b else -v for v, b in zip(interest, bits)]) is True:
                found.add(bits)
        return found
    if mode != "blocking":
        raise ValueError(f"unknown mode {mode!r}")
    while solver.solve() is True:
        model = solver.model()
        bits = tuple(model[v] for v in interest)
        found.add(bits)
        if not interest:
            break
        if not solver.add_clause([-v if b else v for v, b in zip(interest, bits)]):
            break
    return found
