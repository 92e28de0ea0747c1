#!/usr/bin/env python3
"""Smoke test for the dff_py extension module.

Builds the cdylib with cargo, loads it, and exercises the main entry points
with known verdicts. Run from the repository root:

    python3 python/smoke_test.py
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "dff-py"], check=True, cwd=ROOT
    )
    libname = {
        "linux": "libdff_py.so",
        "darwin": "libdff_py.dylib",
        "win32": "dff_py.dll",
    }[sys.platform if sys.platform != "linux2" else "linux"]
    built = ROOT / "target" / "release" / libname
    stage = Path(tempfile.mkdtemp(prefix="dff_py_"))
    shutil.copy(built, stage / "dff_py.so")
    sys.path.insert(0, str(stage))
    import dff_py

    return dff_py


def check(name, ok):
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if not ok:
        sys.exit(1)


def main():
    dff = build_and_import()

    ident = dff.identity()
    check("identity is maximal", ident.is_maximal())
    check("identity is extreme", ident.extremality() == "extreme")
    check("identity evaluates exactly", ident.evaluate("3/7") == "3/7")

    bj32 = dff.phi_bj_1("3/2")
    check("phi_bj_1(3/2) is maximal", bj32.is_maximal())
    check("phi_bj_1(3/2) is not extreme", bj32.extremality() == "not_extreme")
    comps, uncovered = bj32.covered_components()
    check("phi_bj_1(3/2) uncovered (1/3,2/3)", uncovered == [("1/3", "2/3")])

    bj52 = dff.phi_bj_1("5/2")
    check("phi_bj_1(5/2) is maximal", bj52.is_maximal())
    check("phi_bj_1(5/2) value at 3/10", bj52.evaluate("3/10") == "1/4")

    round_trip = dff.PwlFunction.from_json(bj52.to_json())
    check("json round trip", round_trip.to_json() == bj52.to_json())

    restricted = dff.convert_sawtooth("7/2", "1/2", True)
    phi = dff.PwlFunction.from_json(restricted)
    check("conversion restriction is maximal", phi.is_maximal())
    check("conversion restriction is extreme", phi.extremality() == "extreme")
    check("conversion has two slopes", len(set(phi.slopes())) == 2)

    check("lueker bound of identity is 1", dff.lueker_bound(ident, "1/4", "3/4") == "1")

    dim, nv, ne, ninc = dff.search_census(5)
    check("search census q=5", (dim, nv, ne, ninc) == (2, 3, 2, 0))

    f3 = dff.interpolate(3, ["0", "0", "1", "1"])
    check("q=3 vertex is not extreme", f3.extremality() == "not_extreme")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
