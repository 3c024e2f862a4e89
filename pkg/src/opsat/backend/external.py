"""Drive an external MaxSAT solver through the evaluation-track stdout protocol."""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
import tempfile
import time

from ..errors import SolverCrashed, UnparsableOutput
from .instance import (
    OPTIMUM,
    SATISFIABLE,
    TIMEOUT,
    UNKNOWN,
    UNSATISFIABLE,
    MaxSatInstance,
    SolverResult,
)
from .wcnf import write_wcnf

SOLVER_ENV = "OPSAT_MAXSAT_SOLVER"
TMPDIR_ENV = "OPSAT_TMPDIR"

STATUS_WORDS = {
    "OPTIMUM FOUND": OPTIMUM,
    "OPTIMUM": OPTIMUM,
    "UNSATISFIABLE": UNSATISFIABLE,
    "SATISFIABLE": SATISFIABLE,
    "UNKNOWN": UNKNOWN,
}


def bundled_rc2_command() -> list[str]:
    """Command line for the RC2 wrapper shipped with this package (needs python-sat)."""
    return [sys.executable, "-m", "opsat.backend.rc2_runner"]


def default_command() -> list[str] | None:
    cmd = os.environ.get(SOLVER_ENV)
    return shlex.split(cmd) if cmd else None


def parse_v_line(tokens: list[str], nvars: int) -> list[int]:
    """Decode a ``v`` line in either dialect into a 0/1 list indexed by variable.

    A single token of 0/1 characters is the bitstring dialect (character i is
    variable i+1); anything else is a list of signed literals.
    """
    model = [0] * (nvars + 1)
    if len(tokens) == 1 and tokens[0] and set(tokens[0]) <= {"0", "1"}:
        bits = tokens[0]
        for i, ch in enumerate(bits[:nvars]):
            model[i + 1] = 1 if ch == "1" else 0
        return model
    for t in tokens:
        try:
            lit = int(t)
        except ValueError:
            raise UnparsableOutput(f"bad literal {t!r} in v line") from None
        if lit == 0:
            continue
        if abs(lit) <= nvars:
            model[abs(lit)] = 1 if lit > 0 else 0
    return model


def parse_solver_output(stdout: str, nvars: int, returncode: int = 0,
                        stderr: str = "") -> SolverResult:
    status = None
    cost = None
    v_tokens: list[str] | None = None
    for raw in stdout.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word not in STATUS_WORDS:
                raise UnparsableOutput(f"unknown status line {line!r}")
            status = STATUS_WORDS[word]
        elif line.startswith("o "):
            try:
                cost = int(line[2:].split()[0])
            except (ValueError, IndexError):
                raise UnparsableOutput(f"bad cost line {line!r}") from None
        elif line.startswith("v ") or line == "v":
            toks = line[1:].split()
            v_tokens = toks if v_tokens is None else v_tokens + toks
    if status is None:
        if returncode != 0:
            raise SolverCrashed(returncode, stderr[-400:])
        raise UnparsableOutput("solver printed no status line")
    result = SolverResult(status, cost=cost)
    if status == UNSATISFIABLE:
        return result
    if v_tokens is None:
        if status in (OPTIMUM, SATISFIABLE):
            result.status = UNKNOWN
            result.detail = "solver reported a cost but no assignment"
        return result
    result.assignment = parse_v_line(_join_bitstring(v_tokens), nvars)
    return result


def _join_bitstring(tokens):
    # several `v` lines of 0/1 strings are one long bitstring
    if tokens and all(set(t) <= {"0", "1"} for t in tokens) and any(len(t) > 1 for t in tokens):
        return ["".join(tokens)]
    return tokens


def run_external(instance: MaxSatInstance, command=None, time_limit: float | None = None,
                 extra_args=(), tmpdir: str | None = None) -> SolverResult:
    """Write ``instance`` to a temp WCNF file and run ``command <path> [extra_args]``."""
    if command is None:
        command = default_command()
    if command is None:
        raise SolverCrashed(-1, f"no external solver configured (set {SOLVER_ENV})")
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    tmpdir = tmpdir or os.environ.get(TMPDIR_ENV) or None
    fd, path = tempfile.mkstemp(suffix=".wcnf", dir=tmpdir)
    start = time.monotonic()
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(write_wcnf(instance))
        try:
            proc = subprocess.run(argv + [path] + list(extra_args), capture_output=True,
                                  text=True, timeout=time_limit)
        except subprocess.TimeoutExpired as exc:
            out = exc.stdout.decode() if isinstance(exc.stdout, bytes) else (exc.stdout or "")
            result = SolverResult(TIMEOUT, detail="time limit reached")
            try:
                partial = parse_solver_output(out, instance.variable_count)
                result.assignment = partial.assignment
                result.cost = partial.cost
            except (UnparsableOutput, SolverCrashed):
                pass
            result.wall_time = time.monotonic() - start
            result.solver = " ".join(argv)
            return result
        except OSError as exc:
            raise SolverCrashed(-1, str(exc)) from None
    finally:
        try:
            os.unlink(path)
        except OSError:
            pass
    result = parse_solver_output(proc.stdout, instance.variable_count,
                                 proc.returncode, proc.stderr)
    if result.assignment is not None:
        result.cost = instance.cost(result.assignment)
    result.wall_time = time.monotonic() - start
    result.solver = " ".join(argv)
    return result
