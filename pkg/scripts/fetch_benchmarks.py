"""Download the larger public instances and convert them into bench/cache/.

Usage: python3 scripts/fetch_benchmarks.py [--dest DIR]

Raw files are not vendored (licensing); only their converted assignment
files are written.  Rows in full.suite refer to the outputs by name.
"""

from __future__ import annotations

import argparse
import sys
import urllib.request
from pathlib import Path

from opsat.bench import ROOT
from opsat.bench.convert import convert_cvrp, convert_jsp, convert_mkp, convert_osp

ORLIB = "http://people.brunel.ac.uk/~mastjjb/jeb/orlib/files/"
TAILLARD = "http://mistic.heig-vd.ch/taillard/problemes.dir/ordonnancement.dir/"
CVRPLIB = "http://vrp.galgos.inf.puc-rio.br/media/com_vrp/instances/E/"

SOURCES = [
    # (output name, url, converter, options)
    ("mknap1-2.dat", ORLIB + "mknap1.txt", convert_mkp, {"index": 2}),
    ("E-n13-k4.dat", CVRPLIB + "E-n13-k4.vrp", convert_cvrp, {}),
    ("ta01-jsp.dat", TAILLARD + "jobshop.dir/tai15_15.txt", convert_jsp, {"index": 1}),
    ("ta01-osp.dat", TAILLARD + "openshop.dir/tai4_4.txt", convert_osp, {"index": 1}),
]


def fetch(url: str) -> str:
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read().decode("utf-8", errors="replace")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default=str(ROOT / "cache"))
    args = ap.parse_args(argv)
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name, url, conv, opts in SOURCES:
        try:
            text = conv(fetch(url), **opts)
        except Exception as exc:  # network or format trouble; keep going
            print(f"{name}: FAILED ({exc})", file=sys.stderr)
            failed += 1
            continue
        (dest / name).write_text(text, encoding="utf-8")
        print(f"{name}: ok")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
