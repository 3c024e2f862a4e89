"""SAT core selection.

The compiled core is used when it imports; setting ``OPSAT_PURE_PYTHON=1``
forces the pure-Python solver.  Both expose the same ``CdclSolver`` API.
"""

from __future__ import annotations

import os

from . import _pycdcl

PurePythonSolver = _pycdcl.CdclSolver
CompiledSolver = None

if os.environ.get("OPSAT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._cdcl import CdclSolver as CompiledSolver
    except ImportError:
        CompiledSolver = None

CdclSolver = CompiledSolver if CompiledSolver is not None else PurePythonSolver
CORE = "compiled" if CompiledSolver is not None else "python"


def make_solver(nvars: int = 0, branching: str = "vsids", core: str | None = None):
    """Build a solver; ``core`` may force ``"python"`` or ``"compiled"``."""
    if core is None:
        cls = CdclSolver
    elif core == "python":
        cls = PurePythonSolver
    elif core == "compiled":
        if CompiledSolver is None:
            raise RuntimeError("compiled SAT core is not available")
        cls = CompiledSolver
    else:
        raise ValueError(f"unknown core {core!r}")
    return cls(nvars, branching)
