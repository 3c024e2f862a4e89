"""Shipped problem models, desk-scale instances and benchmark suites."""

from __future__ import annotations

import shlex
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..errors import FormatError

ROOT = Path(__file__).resolve().parent
MODELS = ROOT / "models"
DATA = ROOT / "data"
RAW = ROOT / "raw"
DESK_SUITE = ROOT / "desk.suite"
FULL_SUITE = ROOT / "full.suite"

PROBLEMS = ("gcp", "tsp", "cvrp", "2evrp", "mkp", "jsp", "osp", "qap",
            "sphere", "schwefel", "rosenbrock")

# (integer bits, fractional bits) used for the published experiments
TABLE_WIDTHS = {
    "gcp": (10, 1), "tsp": (15, 1), "cvrp": (15, 1), "2evrp": (20, 1), "mkp": (15, 5),
    "jsp": (20, 1), "osp": (20, 1), "qap": (10, 1),
    "sphere": (20, 20), "schwefel": (20, 20), "rosenbrock": (20, 20),
}


def model_path(problem: str) -> Path:
    return MODELS / f"{problem}.tex"


@dataclass
class BenchmarkEntry:
    problem: str
    model: Path
    data: Path
    expected: Fraction
    n: int
    m: int
    tolerance: Fraction = Fraction(0)
    options: tuple = ()            # e.g. ("nearest", "external")
    line: int = 0

    @property
    def name(self) -> str:
        return self.data.stem

    @property
    def external_required(self) -> bool:
        return "external" in self.options

    @property
    def rounding(self) -> str:
        return "nearest" if "nearest" in self.options else "reject"

    def matches(self, value) -> bool:
        return value is not None and abs(Fraction(value) - self.expected) <= self.tolerance


def _fraction(tok: str, lineno: int, line: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a number: {tok!r}", lineno, line) from None


def read_suite(path) -> list[BenchmarkEntry]:
    """Rows ``problem model data expected n m [tolerance] [option ...]``.

    Paths are relative to the suite file; ``#`` starts a comment.  Options
    are bare words: ``nearest`` (rounding) and ``external`` (too large for
    the internal solver).
    """
    path = Path(path)
    base = path.parent
    rows = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = shlex.split(line)
        if len(toks) < 6:
            raise FormatError("suite rows need problem model data expected n m", lineno, raw)
        problem, model, data, expected, n, m, *rest = toks
        tol = Fraction(0)
        opts = []
        for t in rest:
            if t[0].isdigit() or t[0] in "-.":
                tol = _fraction(t, lineno, raw)
            else:
                opts.append(t)
        rows.append(BenchmarkEntry(problem, base / model, base / data,
                                   _fraction(expected, lineno, raw), int(n), int(m), tol,
                                   tuple(opts), lineno))
    return rows
