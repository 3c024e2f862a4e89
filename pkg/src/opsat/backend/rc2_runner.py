"""Minimal evaluation-protocol wrapper around python-sat's RC2 MaxSAT solver.

Usage: ``python3 -m opsat.backend.rc2_runner file.wcnf``.  Prints ``s``,
``o`` and a signed-literal ``v`` line.
"""

from __future__ import annotations

import sys

from .wcnf import parse_wcnf


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        print("usage: rc2_runner FILE.wcnf", file=sys.stderr)
        return 2
    try:
        from pysat.examples.rc2 import RC2
        from pysat.formula import WCNF
    except ImportError:
        print("python-sat is not installed", file=sys.stderr)
        return 2
    with open(argv[0]) as fh:
        inst = parse_wcnf(fh.read())
    w = WCNF()
    for c in inst.hard:
        w.append(list(c))
    for c, wt in inst.soft:
        w.append(list(c), weight=wt)
    with RC2(w) as rc2:
        model = rc2.compute()
        if model is None:
            print("s UNSATISFIABLE")
            return 20
        print(f"o {rc2.cost}")
        print("s OPTIMUM FOUND")
        seen = {abs(l) for l in model}
        lits = list(model) + [-v for v in range(1, inst.variable_count + 1) if v not in seen]
        lits.sort(key=abs)
        print("v " + " ".join(str(l) for l in lits))
    return 30


if __name__ == "__main__":
    sys.exit(main())
