"""Clause emission with raw counting, guard literals and constant simplification."""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

from ..codec import BitRegistry, BitWidth, FixedPointWord, alloc_word

# Corrections that can be toggled individually.  Each one repairs a published
# clause set whose semantics differ from the arithmetic it is meant to model.
FIX_MULTIPLIER_OVERFLOW = "multiplier-overflow"
FIX_MULTIPLIER_LSB = "multiplier-lsb"
FIX_ROUNDING_CARRY = "rounding-carry"
FIX_DOMAIN_SKIP = "domain-skip"
FIX_OPPOSITE_SIGNS = "opposite-signs"

ALL_FIXES = frozenset({
    FIX_MULTIPLIER_OVERFLOW,
    FIX_MULTIPLIER_LSB,
    FIX_ROUNDING_CARRY,
    FIX_DOMAIN_SKIP,
    FIX_OPPOSITE_SIGNS,
})

PUBLISHED = frozenset()
CORRECTED = ALL_FIXES


@dataclass
class ClauseSink:
    """Simplified clause store.

    Clauses containing a true constant are dropped, false constants are
    removed, repeated literals are merged and tautologies are discarded.
    An empty clause marks the whole instance as contradictory.
    """

    clauses: list = field(default_factory=list)
    contradiction: bool = False
    keep_raw: bool = False
    raw: list = field(default_factory=list)

    def add(self, lits) -> None:
        if self.keep_raw:
            self.raw.append(tuple(lits))
        out = []
        seen = set()
        for lit in lits:
            if lit is True:
                return
            if lit is False:
                continue
            if -lit in seen:
                return
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        if not out:
            self.contradiction = True
            return
        self.clauses.append(tuple(out))


@dataclass
class RuleStats:
    clauses: int = 0
    aux: int = 0
    calls: int = 0


class Emitter:
    """One encoding session: a registry, a sink, and the active guard.

    ``raw_clauses`` counts every clause handed to :meth:`clause` before any
    simplification, which is the quantity the closed-form counts describe.
    """

    def __init__(self, registry: BitRegistry | None = None, sink: ClauseSink | None = None,
                 fixes=CORRECTED, keep_raw: bool = False):
        self.registry = registry if registry is not None else BitRegistry()
        self.sink = sink if sink is not None else ClauseSink(keep_raw=keep_raw)
        self.fixes = frozenset(fixes)
        self.guard: tuple = ()
        self.raw_clauses = 0
        self.rule_stats: dict[str, RuleStats] = {}

    def fixed(self, name: str) -> bool:
        return name in self.fixes

    def clause(self, *lits) -> None:
        self.raw_clauses += 1
        if self.guard:
            lits = lits + self.guard
        self.sink.add(lits)

    def clause_from(self, lits) -> None:
        self.clause(*lits)

    @contextmanager
    def guarded(self, *lits):
        """Append ``lits`` to every clause emitted inside the block."""
        saved = self.guard
        self.guard = saved + tuple(lits)
        try:
            yield
        finally:
            self.guard = saved

    def fresh(self) -> int:
        return self.registry.fresh()

    def fresh_many(self, k: int) -> list[int]:
        return self.registry.fresh_many(k)

    def fresh_word(self, width: BitWidth) -> FixedPointWord:
        return alloc_word(self.registry, width)

    @contextmanager
    def measure(self, rule: str):
        """Accumulate raw clause and fresh-variable deltas under ``rule``."""
        c0 = self.raw_clauses
        v0 = self.registry.next_id
        try:
            yield
        finally:
            st = self.rule_stats.setdefault(rule, RuleStats())
            st.clauses += self.raw_clauses - c0
            st.aux += self.registry.next_id - v0
            st.calls += 1

    def finish(self) -> list[tuple]:
        """Return the simplified clause list, encoding a contradiction if needed."""
        if self.sink.contradiction:
            x = self.fresh()
            self.sink.contradiction = False
            self.sink.clauses.append((x,))
            self.sink.clauses.append((-x,))
        return self.sink.clauses
