from __future__ import annotations

import itertools
import re
from fractions import Fraction
from pathlib import Path

import pytest

from opsat.bench import DESK_SUITE, FULL_SUITE, DATA, MODELS, RAW, TABLE_WIDTHS, read_suite
from opsat.bench.convert import (convert_cvrp, convert_gcp, convert_instance, convert_jsp,
                                 convert_mkp, convert_osp, convert_qap, convert_shift,
                                 convert_tsp, geo_distance, mkp_optimum)
from opsat.errors import FormatError
from opsat.parser.parser import parse_instance_data

from conftest import ground

TABLES_SOURCE = Path(__file__).resolve().parents[1] / "paper.md"


def bindings(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        name, value = (s.strip() for s in line.split("=", 1))
        out[name] = value
    return out


@pytest.mark.parametrize("raw,data,fn,opts", [
    ("myciel3.col", "myciel3.dat", convert_gcp, {}),
    ("queen5_5.col", "queen5_5.dat", convert_gcp, {}),
    ("mknap1_1.txt", "mknap1-1.dat", convert_mkp, {}),
    ("esc16f.dat", "esc16f.dat", convert_qap, {}),
    ("burma14.tsp", "burma14.dat", convert_tsp, {}),
    ("sphere_shift10.txt", "sphere_d10.dat", convert_shift, {"dimension": 10}),
])
def test_converters_reproduce_shipped_data(raw, data, fn, opts):
    assert fn((RAW / raw).read_text(), **opts) == (DATA / data).read_text()


def test_burma14_all_pairs():
    b = bindings(convert_tsp((RAW / "burma14.tsp").read_text()))
    assert b["n"] == "14"
    assert len([k for k in b if k.startswith("c_")]) == 14 * 13
    assert all(b[f"c_{{{i},{j}}}"] == b[f"c_{{{j},{i}}}"]
               for i, j in itertools.permutations(range(1, 15), 2))


def test_geo_metric_known_pair():
    # burma14 cities 1 and 2 in the TSPLIB GEO metric
    assert geo_distance((16.47, 96.10), (16.47, 94.44)) == 153


def test_gcp_edges_and_errors():
    b = bindings(convert_gcp("c tiny\np edge 3 2\ne 1 2\ne 3 2\n"))
    assert b == {"n": "3", "c_{1,2}": "1", "c_{1,3}": "0", "c_{2,3}": "1"}
    with pytest.raises(FormatError):
        convert_gcp("e 1 2\n")
    with pytest.raises(FormatError):
        convert_gcp("p edge 2 1\ne 1 5\n")


def test_mkp_header_optimum():
    raw = (RAW / "mknap1_1.txt").read_text()
    assert mkp_optimum(raw) == 3800
    with pytest.raises(FormatError):
        convert_mkp(raw, index=9)


def test_qap_trailing_data():
    with pytest.raises(FormatError):
        convert_qap("1\n0\n0\n7\n")


CVRP = """NAME : T-n3-k2
TYPE : CVRP
DIMENSION : 3
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 5
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 1
DEMAND_SECTION
1 0
2 2
3 4
DEPOT_SECTION
1
-1
EOF
"""


def test_cvrp_fleet_from_name():
    b = bindings(convert_cvrp(CVRP))
    assert (b["m"], b["n"], b["Q"], b["q_{2}"], b["q_{3}"]) == ("2", "3", "5", "2", "4")
    assert b["d_{1,2}"] == "5" and b["d_{2,3}"] == "4" and b["d_{1,1}"] == "0"
    with pytest.raises(FormatError):
        convert_cvrp(CVRP.replace("-k2", ""))
    assert bindings(convert_cvrp(CVRP.replace("-k2", ""), vehicles=3))["m"] == "3"


TAILLARD = """Nb of jobs, Nb of Machines, Time seed, Machine seed, Upper bound, Lower bound
 2 2 1 1 7 7
Times
 3 2
 1 4
Machines
 2 1
 1 2
"""


def test_taillard_job_shop():
    b = bindings(convert_jsp(TAILLARD))
    # job 1 visits machine 2 (3 units) then machine 1 (2 units)
    assert b["p_{2,1}"] == "3" and b["p_{1,1}"] == "2"
    assert b["\\sigma_{1,1}"] == "2" and b["\\sigma_{2,2}"] == "2"


def test_taillard_open_shop_without_machines():
    text = TAILLARD.split("Machines\n")[0]
    b = bindings(convert_osp(text))
    assert b["p_{1,1}"] == "3" and b["p_{2,1}"] == "2" and b["p_{2,2}"] == "4"
    with pytest.raises(FormatError):
        convert_jsp(text)


def test_taillard_multi_instance_index():
    two = TAILLARD + "\n" + TAILLARD.replace(" 3 2\n", " 9 9\n")
    assert bindings(convert_jsp(two, index=2))["p_{2,1}"] == "9"
    with pytest.raises(FormatError):
        convert_jsp(two, index=3)


def test_shift_vector():
    b = bindings(convert_shift("1.5 -2e0 3\n", 2))
    assert b == {"D": "2", "o_{1}": "1.5", "o_{2}": "-2"}
    with pytest.raises(FormatError):
        convert_shift("1 2", 3)


def test_unknown_converter():
    with pytest.raises(FormatError):
        convert_instance("2evrp", "")


def test_converter_output_is_instance_data():
    for raw, fn in (("myciel3.col", convert_gcp), ("esc16f.dat", convert_qap)):
        assert parse_instance_data(fn((RAW / raw).read_text()))


SMALLEST = {}
for _row in read_suite(DESK_SUITE):
    if _row.name not in ("myciel3", "queen5_5", "esc16f", "mknap1-1", "sphere_d10"):
        SMALLEST.setdefault(_row.model.name, _row)


@pytest.mark.parametrize("model", sorted(p.name for p in MODELS.glob("*.tex")))
def test_every_model_grounds(model):
    row = SMALLEST[model]
    gm = ground(row.model.read_text(), row.data.read_text())
    assert gm.constraints and gm.decision_vars


def test_read_suite(tmp_path):
    p = tmp_path / "s.suite"
    p.write_text("# c\nsphere m.tex d.dat -450 20 20 1/1024 nearest external  # tail\n"
                 "gcp m.tex d.dat 4 10 1\n")
    a, b = read_suite(p)
    assert a.tolerance == Fraction(1, 1024) and a.rounding == "nearest" and a.external_required
    assert a.data == tmp_path / "d.dat" and a.line == 2
    assert b.tolerance == 0 and b.rounding == "reject" and not b.options
    assert a.matches(Fraction(-450) + Fraction(1, 2048)) and not a.matches(-449)
    p.write_text("gcp m.tex d.dat 4 10\n")
    with pytest.raises(FormatError):
        read_suite(p)
    p.write_text("gcp m.tex d.dat four 10 1\n")
    with pytest.raises(FormatError):
        read_suite(p)


def _published_best(instance: str) -> Fraction:
    name = re.escape(instance).replace("_", r"\\?_")
    pattern = re.compile(r"&\s*" + name + r"\s*&\s*(-?[\d.]+)")
    for line in TABLES_SOURCE.read_text().splitlines():
        m = pattern.search(line)
        if m:
            return Fraction(m.group(1))
    raise LookupError(instance)


TABLE_NAMES = {"myciel3": "myciel3", "queen5_5": "queen5_5", "mknap1-1": "mknap1-1",
               "esc16f": "esc16f", "sphere_d10": "sphere10", "burma14": "burma14",
               "E-n13-k4": "E-n13-k4", "mknap1-2": "mknap1-2"}


@pytest.mark.skipif(not TABLES_SOURCE.exists(), reason="reference text not present")
def test_suite_expected_values_match_published_tables():
    seen = 0
    for row in read_suite(DESK_SUITE) + read_suite(FULL_SUITE):
        key = TABLE_NAMES.get(row.name)
        if key is None:
            continue
        assert row.expected == _published_best(key), row.name
        assert (row.n, row.m) == TABLE_WIDTHS[row.problem], row.name
        seen += 1
    assert seen >= 7
