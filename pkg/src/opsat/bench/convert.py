"""Public benchmark formats to instance-data files.

Every converter returns the text of an assignment file binding the
parameter symbols of the matching model in ``bench/models``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from ..errors import FormatError


def _num(tok: str, lineno: int, line: str):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a number: {tok!r}", lineno, line) from None


def _fmt(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    # exact decimal when the denominator allows it, else a fraction
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        digits = 0
        while (q * 10 ** digits).denominator != 1:
            digits += 1
        sign = "-" if q < 0 else ""
        a = abs(q) * 10 ** digits
        s = str(int(a)).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}"
    return f"\\frac{{{q.numerator}}}{{{q.denominator}}}"


def _line(name: str, idx, value) -> str:
    if idx:
        return f"{name}_{{{','.join(str(i) for i in idx)}}} = {_fmt(value)}"
    return f"{name} = {_fmt(value)}"


def _numbers(text: str):
    """All numeric tokens with their line context."""
    for lineno, line in enumerate(text.splitlines(), 1):
        for tok in line.split():
            yield _num(tok, lineno, line), lineno, line


class _Stream:
    def __init__(self, text: str, what: str):
        self.items = list(_numbers(text))
        self.pos = 0
        self.what = what

    def take(self):
        if self.pos >= len(self.items):
            last = self.items[-1] if self.items else (None, 0, "")
            raise FormatError(f"{self.what}: unexpected end of data", last[1], last[2])
        self.pos += 1
        return self.items[self.pos - 1][0]

    def take_int(self) -> int:
        v = self.take()
        if v.denominator != 1:
            _, lineno, line = self.items[self.pos - 1]
            raise FormatError(f"{self.what}: expected an integer, got {v}", lineno, line)
        return int(v)


# -- graph coloring (DIMACS .col, as distributed by OR-Library) ----------------------

def convert_gcp(text: str) -> str:
    n = None
    edges = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 4:
                raise FormatError("malformed problem line", lineno, line)
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None or len(parts) < 3:
                raise FormatError("edge before problem line or malformed edge", lineno, line)
            a, b = int(parts[1]), int(parts[2])
            if not (1 <= a <= n and 1 <= b <= n) or a == b:
                raise FormatError(f"edge {a}-{b} out of range", lineno, line)
            edges.add((min(a, b), max(a, b)))
        else:
            raise FormatError(f"unknown line type {parts[0]!r}", lineno, line)
    if n is None:
        raise FormatError("missing problem line", 0, "")
    out = [_line("n", (), n)]
    # the model filters pairs with i < j first, so only those entries are needed
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(_line("c", (i, j), 1 if (i, j) in edges else 0))
    return "\n".join(out) + "\n"


# -- multidimensional knapsack (OR-Library mknap1) ---------------------------------------

def convert_mkp(text: str, index: int = 1) -> str:
    s = _Stream(text, "mknap")
    count = s.take_int()
    if not 1 <= index <= count:
        raise FormatError(f"instance {index} not in file with {count} problems", 1, "")
    for k in range(1, count + 1):
        n, m = s.take_int(), s.take_int()
        s.take()  # optimum (0 when unknown)
        profits = [s.take() for _ in range(n)]
        weights = [[s.take() for _ in range(n)] for _ in range(m)]
        caps = [s.take() for _ in range(m)]
        if k == index:
            out = [_line("n", (), n), _line("m", (), m)]
            out += [_line("v", (i,), p) for i, p in enumerate(profits, 1)]
            out += [_line("w", (i, j), weights[j - 1][i - 1])
                    for j in range(1, m + 1) for i in range(1, n + 1)]
            out += [_line("W", (j,), c) for j, c in enumerate(caps, 1)]
            return "\n".join(out) + "\n"
    raise AssertionError("unreachable")


def mkp_optimum(text: str, index: int = 1):
    """The optimum recorded in an mknap file header (0 means unknown)."""
    s = _Stream(text, "mknap")
    count = s.take_int()
    for k in range(1, count + 1):
        n, m = s.take_int(), s.take_int()
        opt = s.take()
        if k == index:
            return opt
        s.pos += n + n * m + m
    raise FormatError(f"instance {index} not found", 1, "")


# -- quadratic assignment (QAPLIB .dat) --------------------------------------------------

def convert_qap(text: str) -> str:
    """``n``, then flow matrix ``A``, then distance matrix ``B``."""
    s = _Stream(text, "qaplib")
    n = s.take_int()
    a = [[s.take() for _ in range(n)] for _ in range(n)]
    b = [[s.take() for _ in range(n)] for _ in range(n)]
    if s.pos != len(s.items):
        _, lineno, line = s.items[s.pos]
        raise FormatError("trailing data after the two matrices", lineno, line)
    out = [_line("n", (), n)]
    out += [_line("f", (i + 1, j + 1), a[i][j]) for i in range(n) for j in range(n)]
    out += [_line("d", (i + 1, j + 1), b[i][j]) for i in range(n) for j in range(n)]
    return "\n".join(out) + "\n"


# -- TSPLIB / CVRPLIB ----------------------------------------------------------------

def _tsplib_sections(text: str):
    spec = {}
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "EOF":
            continue
        m = re.match(r"^([A-Z_]+)\s*:\s*(.*)$", line)
        if m and not line.endswith("_SECTION"):
            spec[m.group(1)] = m.group(2).strip()
            current = None
            continue
        if re.match(r"^[A-Z_]+_SECTION$", line):
            current = line
            sections[current] = []
            continue
        if current is None:
            raise FormatError("data outside a section", lineno, raw)
        sections[current].append((lineno, raw))
    return spec, sections


def _geo_radians(x: float) -> float:
    deg = int(x)
    minutes = x - deg
    return math.pi * (deg + 5.0 * minutes / 3.0) / 180.0


def geo_distance(a, b) -> int:
    """TSPLIB GEO metric on (latitude, longitude) given as DDD.MM."""
    rrr = 6378.388
    lat1, lon1 = _geo_radians(a[0]), _geo_radians(a[1])
    lat2, lon2 = _geo_radians(b[0]), _geo_radians(b[1])
    q1 = math.cos(lon1 - lon2)
    q2 = math.cos(lat1 - lat2)
    q3 = math.cos(lat1 + lat2)
    return int(rrr * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0)


def euc2d_distance(a, b) -> int:
    """TSPLIB EUC_2D: Euclidean distance rounded to the nearest integer."""
    return int(math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) + 0.5)


_METRICS = {"GEO": geo_distance, "EUC_2D": euc2d_distance}


def _distance_matrix(spec, sections) -> list:
    n = int(spec.get("DIMENSION", 0))
    kind = spec.get("EDGE_WEIGHT_TYPE", "")
    if kind == "EXPLICIT":
        fmt = spec.get("EDGE_WEIGHT_FORMAT", "")
        rows = sections.get("EDGE_WEIGHT_SECTION", [])
        vals = [int(t) for _, r in rows for t in r.split()]
        d = [[0] * n for _ in range(n)]
        if fmt == "FULL_MATRIX":
            it = iter(vals)
            for i in range(n):
                for j in range(n):
                    d[i][j] = next(it)
        elif fmt in ("LOWER_DIAG_ROW", "UPPER_DIAG_ROW", "UPPER_ROW", "LOWER_ROW"):
            it = iter(vals)
            for i in range(n):
                if fmt == "LOWER_DIAG_ROW":
                    cols = range(0, i + 1)
                elif fmt == "LOWER_ROW":
                    cols = range(0, i)
                elif fmt == "UPPER_DIAG_ROW":
                    cols = range(i, n)
                else:
                    cols = range(i + 1, n)
                for j in cols:
                    d[i][j] = d[j][i] = next(it)
        else:
            raise FormatError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}", 0, "")
        return d
    if kind not in _METRICS:
        raise FormatError(f"unsupported EDGE_WEIGHT_TYPE {kind!r}", 0, "")
    coords = {}
    for lineno, raw in sections.get("NODE_COORD_SECTION", []):
        parts = raw.split()
        if len(parts) < 3:
            raise FormatError("malformed coordinate line", lineno, raw)
        coords[int(parts[0])] = (float(parts[1]), float(parts[2]))
    if len(coords) != n:
        raise FormatError(f"expected {n} coordinates, found {len(coords)}", 0, "")
    ids = sorted(coords)
    metric = _METRICS[kind]
    return [[0 if a == b else metric(coords[a], coords[b]) for b in ids] for a in ids]


def convert_tsp(text: str) -> str:
    spec, sections = _tsplib_sections(text)
    d = _distance_matrix(spec, sections)
    n = len(d)
    out = [_line("n", (), n)]
    out += [_line("c", (i + 1, j + 1), d[i][j]) for i in range(n) for j in range(n) if i != j]
    return "\n".join(out) + "\n"


def convert_cvrp(text: str, vehicles: int | None = None) -> str:
    """CVRPLIB; depot is node 1. The fleet size comes from ``-kK`` in the name."""
    spec, sections = _tsplib_sections(text)
    d = _distance_matrix(spec, sections)
    n = len(d)
    if vehicles is None:
        m = re.search(r"-k(\d+)", spec.get("NAME", ""))
        if not m:
            raise FormatError("fleet size not given and not in NAME", 0, "")
        vehicles = int(m.group(1))
    demands = {}
    for lineno, raw in sections.get("DEMAND_SECTION", []):
        parts = raw.split()
        if len(parts) != 2:
            raise FormatError("malformed demand line", lineno, raw)
        demands[int(parts[0])] = int(parts[1])
    out = [_line("m", (), vehicles), _line("n", (), n), _line("Q", (), int(spec["CAPACITY"]))]
    out += [_line("q", (i,), demands.get(i, 0)) for i in range(2, n + 1)]
    out += [_line("d", (i + 1, j + 1), d[i][j]) for i in range(n) for j in range(n)]
    return "\n".join(out) + "\n"


# -- Taillard scheduling ------------------------------------------------------------

def _taillard_blocks(text: str, index: int = 1):
    """(jobs, machines, times rows, machine rows or None) of instance ``index``."""
    lines = list(enumerate(text.splitlines(), 1))
    starts = [k for k, (_, raw) in enumerate(lines) if raw.strip().lower().startswith("nb of jobs")]
    if starts:
        if not 1 <= index <= len(starts):
            raise FormatError(f"instance {index} not in file with {len(starts)} instances", 0, "")
        end = starts[index] if index < len(starts) else len(lines)
        lines = lines[starts[index - 1]:end]
    nums = []
    times = []
    machines = []
    current = None
    for lineno, raw in lines:
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("nb of jobs"):
            current = "header"
            continue
        if low.startswith("times") or low.startswith("processing"):
            current = "times"
            continue
        if low.startswith("machines"):
            current = "machines"
            continue
        row = [int(_num(t, lineno, raw)) for t in line.split()]
        if current == "header":
            nums = row
            current = None
        elif current == "times":
            times.append(row)
        elif current == "machines":
            machines.append(row)
        else:
            raise FormatError("data outside a block", lineno, raw)
    if len(nums) < 2:
        raise FormatError("missing 'Nb of jobs, Nb of Machines' header", 0, "")
    return nums[0], nums[1], times, machines or None


def convert_jsp(text: str, index: int = 1) -> str:
    """Taillard job shop: rows are jobs; machine ids are 1-based."""
    n, m, times, machines = _taillard_blocks(text, index)
    if machines is None or len(times) != n or len(machines) != n:
        raise FormatError(f"expected {n} time and machine rows", 0, "")
    out = [_line("n", (), n), _line("m", (), m)]
    for j in range(n):
        if len(times[j]) != m or len(machines[j]) != m:
            raise FormatError(f"job {j + 1} needs {m} operations", 0, "")
        for h in range(m):
            # p_{i,j}: time of job j on machine i; sigma_{j,h}: h-th machine of job j
            out.append(_line("p", (machines[j][h], j + 1), times[j][h]))
        for h in range(m):
            out.append(_line("\\sigma", (j + 1, h + 1), machines[j][h]))
    return "\n".join(out) + "\n"


def convert_osp(text: str, index: int = 1) -> str:
    """Taillard open shop: ``times[j][h]`` is job j on machine ``machines[j][h]``."""
    n, m, times, machines = _taillard_blocks(text, index)
    if len(times) != n:
        raise FormatError(f"expected {n} time rows", 0, "")
    out = [_line("n", (), n), _line("m", (), m)]
    for j in range(n):
        order = machines[j] if machines else list(range(1, m + 1))
        for h in range(m):
            out.append(_line("p", (order[h], j + 1), times[j][h]))
    return "\n".join(out) + "\n"


# -- CEC 2005 shift vectors -------------------------------------------------------------

def convert_shift(text: str, dimension: int) -> str:
    vals = [v for v, _, _ in _numbers(text)]
    if len(vals) < dimension:
        raise FormatError(f"shift vector has {len(vals)} entries, need {dimension}", 0, "")
    out = [_line("D", (), dimension)]
    out += [_line("o", (i,), v) for i, v in enumerate(vals[:dimension], 1)]
    return "\n".join(out) + "\n"


CONVERTERS = {
    "gcp": convert_gcp,
    "mkp": convert_mkp,
    "qap": convert_qap,
    "tsp": convert_tsp,
    "cvrp": convert_cvrp,
    "jsp": convert_jsp,
    "osp": convert_osp,
    "sphere": convert_shift,
    "schwefel": convert_shift,
    "rosenbrock": convert_shift,
}


def convert_instance(problem: str, text: str, **options) -> str:
    try:
        fn = CONVERTERS[problem]
    except KeyError:
        raise FormatError(f"no converter for problem {problem!r}", 0, "") from None
    return fn(text, **options)
