"""parse -> ground -> reduce -> solve -> decode -> check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .backend import instance as inst_mod
from .backend.external import bundled_rc2_command, run_external
from .backend.internal import solve_internal
from .codec import REJECT, BitWidth, write_varmap
from .encoder.tree import Reduction, reduce_model, stored_model
from .errors import DecodedInfeasible, MissingValue, OpsatError, SolverTimeout
from .evaluator import FeasibilityReport, check_feasibility, decode_solution, evaluate_numeric
from .grounder.ground import Grounder, ground_model
from .grounder.nodes import GroundModel, GVar
from .grounder.printer import fmt_number
from .parser.parser import parse_instance_data, parse_model

INTERNAL = "internal"
EXTERNAL = "external"

_STATUS = {
    inst_mod.OPTIMUM: "optimum",
    inst_mod.SATISFIABLE: "satisfiable",
    inst_mod.UNSATISFIABLE: "infeasible",
    inst_mod.UNKNOWN: "unknown",
    inst_mod.TIMEOUT: "timeout",
}


@dataclass
class RunConfig:
    model_path: str | None = None
    data_path: str | None = None
    n: int | None = None
    m: int | None = None
    rounding: str = REJECT
    backend: str = INTERNAL
    solver_command: str | None = None
    time_limit: float | None = None
    wcnf_path: str | None = None
    varmap_path: str | None = None
    report_path: str | None = None
    timings: bool = True
    strict_domains: bool = False
    branching: str = "vsids"

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("int bits must be at least 1")
        if self.m is not None and self.m < 0:
            raise ValueError("frac bits must be non-negative")


def default_width(model: GroundModel, n: int | None = None, m: int | None = None) -> BitWidth:
    """Unset widths default to (20, 1) for integer-only models, (20, 20) otherwise."""
    if m is None:
        m = 1 if model.integer_only else 20
    return BitWidth(20 if n is None else n, m)


def load_ground(model_text: str, data_text: str = "", strict_domains: bool = False):
    model = parse_model(model_text)
    data = parse_instance_data(data_text) if data_text else []
    gm, known = ground_model(model, data, strict_domains=strict_domains)
    return gm, known


def read_text(path: str | None) -> str:
    return Path(path).read_text(encoding="utf-8") if path else ""


def read_solution(text: str) -> dict:
    """``name = value`` lines (same syntax as instance data) to a GVar map."""
    g = Grounder()
    out = {}
    for a in parse_instance_data(text):
        name, idx = g.key(a.target, {})
        out[GVar(name, idx)] = g.const(a.value, {})
    return out


@dataclass
class RunReport:
    status: str
    width: BitWidth
    values: dict = field(default_factory=dict)       # GVar -> Fraction
    objective: Fraction | None = None                # objective of the decoded values
    exact_objective: Fraction | None = None          # same, with unrounded constants
    word_objective: Fraction | None = None           # v(u) of the objective word
    feasibility: FeasibilityReport | None = None
    stats: dict = field(default_factory=dict)
    solve_time: float = 0.0
    solver: str = ""
    precision: list = field(default_factory=list)    # (given, stored) per rounded constant

    @property
    def feasible(self) -> bool | None:
        return None if self.feasibility is None else self.feasibility.feasible

    def lines(self, timings: bool = True) -> list[str]:
        out = [f"status={self.status}", f"int_bits={self.width.n}", f"frac_bits={self.width.m}"]
        if self.objective is not None:
            out.append(f"objective={fmt_number(self.objective)}")
            out.append(f"objective_float={float(self.objective):.12g}")
        if self.exact_objective is not None and self.exact_objective != self.objective:
            out.append(f"exact_objective={fmt_number(self.exact_objective)}")
            out.append(f"exact_objective_float={float(self.exact_objective):.12g}")
        if self.word_objective is not None:
            out.append(f"word_objective={fmt_number(self.word_objective)}")
        if self.feasible is not None:
            out.append(f"feasible={'yes' if self.feasible else 'no'}")
        if self.precision:
            worst = max(abs(a - b) for a, b in self.precision)
            out.append(f"rounded_constants={len(self.precision)}")
            out.append(f"max_rounding_error={float(worst):.6g}")
        for k, v in self.stats.items():
            if timings or not k.endswith("_time"):
                out.append(f"{k}={v}")
        if timings:
            out.append(f"solve_time={self.solve_time:.6f}")
        if self.solver:
            out.append(f"solver={self.solver}")
        for var, val in self.values.items():
            out.append(f"value.{var.name}={fmt_number(val)}")
        return out

    def text(self, timings: bool = True) -> str:
        return "\n".join(self.lines(timings)) + "\n"


def solve_reduction(red: Reduction, config: RunConfig):
    if config.backend == EXTERNAL:
        cmd = config.solver_command
        if cmd == "rc2":  # the bundled python-sat wrapper
            cmd = bundled_rc2_command()
        return run_external(red.instance, cmd, config.time_limit)
    return solve_internal(red.instance, config.time_limit, branching=config.branching)


def write_artifacts(red: Reduction, config: RunConfig) -> None:
    from .backend.wcnf import write_wcnf
    if config.wcnf_path:
        Path(config.wcnf_path).write_text(write_wcnf(red.instance), encoding="utf-8")
    if config.varmap_path:
        Path(config.varmap_path).write_text(write_varmap(red.varmap_entries()), encoding="utf-8")


def run_ground(gm: GroundModel, config: RunConfig, width: BitWidth | None = None) -> RunReport:
    """Reduce, solve and decode an already grounded model."""
    width = width or default_width(gm, config.n, config.m)
    red = reduce_model(gm, width, config.rounding)
    write_artifacts(red, config)
    res = solve_reduction(red, config)
    report = RunReport(_STATUS.get(res.status, res.status.lower()), width, stats=dict(red.stats),
                       solve_time=res.wall_time, solver=res.solver,
                       precision=[(p.value, p.stored) for p in red.precision])
    if res.assignment is not None and res.status != inst_mod.UNSATISFIABLE:
        # check against the constants the clauses actually encode
        d = decode_solution(red, res.assignment, stored_model(gm, width, config.rounding))
        report.values = d.values
        report.feasibility = d.report
        report.objective = d.report.objective
        report.word_objective = d.word_objective
        try:
            report.exact_objective = evaluate_numeric(gm.objective, d.values)
        except OpsatError:
            report.exact_objective = None
        if res.status == inst_mod.OPTIMUM and not d.report.feasible:
            bad = "; ".join(f"{v.origin}: {v.text}" for v in d.report.violated[:5])
            raise DecodedInfeasible(f"solver optimum decodes to an infeasible point ({bad})")
    return report


def run_pipeline(config: RunConfig) -> RunReport:
    gm, _ = load_ground(read_text(config.model_path), read_text(config.data_path),
                        config.strict_domains)
    report = run_ground(gm, config)
    if config.report_path:
        Path(config.report_path).write_text(report.text(config.timings), encoding="utf-8")
    return report


def reduce_only(config: RunConfig):
    gm, _ = load_ground(read_text(config.model_path), read_text(config.data_path),
                        config.strict_domains)
    width = default_width(gm, config.n, config.m)
    red = reduce_model(gm, width, config.rounding)
    write_artifacts(red, config)
    return gm, red


def check_solution(model_text: str, data_text: str, solution_text: str) -> FeasibilityReport:
    gm, _ = load_ground(model_text, data_text)
    values = read_solution(solution_text)
    for v, _ in gm.decision_vars:
        if v not in values and v not in getattr(gm, "aux_defs", {}):
            raise MissingValue(v.name)
    return check_feasibility(gm, values)


def timeout_error(report: RunReport) -> SolverTimeout:
    return SolverTimeout(f"time limit reached; best status {report.status}")
