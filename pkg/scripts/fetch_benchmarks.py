#!/usr/bin/env python3
"""Collect the benchmark EPANET networks into ./benchmarks/.

The benchmark INP files (Hanoi, AnyTown, Net3, D-town, L-town) are not
redistributed with this repository for licensing reasons. This script
looks for them in packages or directories you already have and copies
them under canonical names; `tests/test_acceptance.py` picks them up from
there (or from $STRUCSENSE_BENCH_DIR).

Sources it knows how to scan:
  * an installed `epyt` package (ships many EPANET networks)
  * an installed `wntr` package (ships Net3 among its examples)
  * any directory passed on the command line

If a network cannot be found the script prints where to get it manually:
  * Hanoi / AnyTown / Net3 / D-town: EPANET-MATLAB-toolkit or epyt network
    collections (github.com/OpenWaterAnalytics)
  * L-town: the BattLeDIM challenge dataset (zenodo.org/record/4017659)
"""

import re
import shutil
import sys
from pathlib import Path

TARGETS = {
    "hanoi": "Hanoi.inp",
    "anytown": "AnyTown.inp",
    "net3": "Net3.inp",
    "d-town": "D-town.inp",
    "dtown": "D-town.inp",
    "l-town": "L-town.inp",
    "ltown": "L-town.inp",
}


def candidate_dirs(extra):
    for name in ("epyt", "wntr"):
        try:
            module = __import__(name)
        except ImportError:
            continue
        yield Path(module.__file__).parent
    for arg in extra:
        yield Path(arg)


def main(argv):
    dest = Path(__file__).resolve().parent.parent / "benchmarks"
    dest.mkdir(exist_ok=True)
    found = {}
    for root in candidate_dirs(argv):
        if not root.exists():
            print(f"skipping missing directory {root}")
            continue
        for inp in root.rglob("*.inp"):
            key = re.sub(r"[_ ]", "-", inp.stem.lower())
            canonical = TARGETS.get(key) or TARGETS.get(key.replace("-", ""))
            if canonical and canonical not in found:
                shutil.copy(inp, dest / canonical)
                found[canonical] = inp
                print(f"copied {inp} -> benchmarks/{canonical}")
    missing = sorted(set(TARGETS.values()) - set(found))
    if missing:
        print("\nstill missing:", ", ".join(missing))
        print("see the module docstring for where to download them, then rerun")
        print(f"  python {Path(__file__).name} /path/to/your/inp/files")
        return 1
    print("\nall benchmark networks present")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
