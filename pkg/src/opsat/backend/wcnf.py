"""WCNF serialization (new ``h``-marker format, with a legacy header variant)."""

from __future__ import annotations

from ..errors import UnparsableOutput
from .instance import MaxSatInstance


def _lits(clause) -> str:
    return " ".join(str(l) for l in clause)


def write_wcnf(instance: MaxSatInstance, legacy: bool = False, comments=()) -> str:
    """Serialize hard clauses in emission order, then soft clauses in list order.

    The new format has no header; a ``c variables N`` comment records the
    variable count so a round trip is exact.  ``legacy`` writes the
    ``p wcnf`` header with ``top`` as the hard-clause weight.
    """
    out = [f"c {line}" for line in comments]
    nv = instance.variable_count
    if legacy:
        top = instance.total_soft_weight + 1
        out.append(f"p wcnf {nv} {len(instance.hard) + len(instance.soft)} {top}")
        out.extend(f"{top} {_lits(c)} 0" for c in instance.hard)
    else:
        out.append(f"c variables {nv}")
        out.extend(f"h {_lits(c)} 0" for c in instance.hard)
    out.extend(f"{w} {_lits(c)} 0" for c, w in instance.soft)
    return "\n".join(out) + "\n"


def parse_wcnf(text: str) -> MaxSatInstance:
    """Read either format.  In legacy files, clauses weighing ``top`` are hard."""
    nv = 0
    top = None
    hard, soft = [], []
    pending: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1] == "variables" and parts[2].isdigit():
                nv = int(parts[2])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "wcnf":
                raise UnparsableOutput(f"line {lineno}: bad header {line!r}")
            nv = int(parts[2])
            top = int(parts[4]) if len(parts) > 4 else None
            continue
        pending.extend(line.split())
        # clauses may span lines; a 0 token terminates each
        while "0" in pending[1:]:
            end = pending.index("0", 1)
            head, body = pending[0], pending[1:end]
            pending = pending[end + 1:]
            try:
                lits = tuple(int(t) for t in body)
                if head == "h":
                    hard.append(lits)
                    continue
                w = int(head)
            except ValueError as exc:
                raise UnparsableOutput(f"line {lineno}: {exc}") from None
            if top is not None and w >= top:
                hard.append(lits)
            else:
                soft.append((lits, w))
    if pending:
        raise UnparsableOutput("unterminated clause at end of file")
    return MaxSatInstance(nv, hard, soft)
