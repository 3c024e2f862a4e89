"""MaxSAT instance and solver result records."""

from __future__ import annotations

from dataclasses import dataclass, field

OPTIMUM = "OPTIMUM"
SATISFIABLE = "SATISFIABLE"
UNSATISFIABLE = "UNSATISFIABLE"
UNKNOWN = "UNKNOWN"
TIMEOUT = "TIMEOUT"


@dataclass
class MaxSatInstance:
    """Hard clauses plus weighted soft clauses over variables ``1..variable_count``."""

    variable_count: int = 0
    hard: list = field(default_factory=list)
    soft: list = field(default_factory=list)  # (clause, weight)

    def __post_init__(self):
        self.hard = [tuple(c) for c in self.hard]
        self.soft = [(tuple(c), int(w)) for c, w in self.soft]
        top = max([abs(l) for c in self.hard for l in c]
                  + [abs(l) for c, _ in self.soft for l in c] + [0])
        self.variable_count = max(self.variable_count, top)

    @property
    def total_soft_weight(self) -> int:
        return sum(w for _, w in self.soft)

    def cost(self, assignment) -> int:
        """Summed weight of soft clauses the assignment falsifies."""
        return sum(w for c, w in self.soft if not _satisfied(c, assignment))

    def satisfies_hard(self, assignment) -> bool:
        return all(_satisfied(c, assignment) for c in self.hard)


def _satisfied(clause, assignment) -> bool:
    for lit in clause:
        if bool(assignment[abs(lit)]) == (lit > 0):
            return True
    return False


@dataclass
class SolverResult:
    status: str
    assignment: list | None = None   # 0/1 indexed by variable id, index 0 unused
    cost: int | None = None
    solver: str = ""
    wall_time: float = 0.0
    detail: str = ""

    @property
    def has_model(self) -> bool:
        return self.assignment is not None
