#!/usr/bin/env python3
"""Export the CSV bundles behind the standard figures via the qpc CLI.

Produces, under --out-dir:
  q2_locus.csv               Q2 partially umbilic curves (with torsion)
  q2_leaf_f1.csv / _f2.csv   one closed and one escaping Q2 leaf
  q0_umbilics.csv            ellipsoid umbilic points
  q0_leaf_f1.csv / _f2.csv   ellipsoid principal net representatives
Everything goes through `python -m qpc ...` so the files exercise the same
external interface the viz package consumes.
"""

import argparse
import pathlib
import subprocess
import sys

import numpy as np

import qpc
from qpc.tracer import census_seeds


def run(args):
    cmd = [sys.executable, "-m", "qpc", *args]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)


def fmt_point(p):
    return ",".join(format(v, ".17g") for v in p)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="out")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    q2 = ["--family", "Q2", "--semiaxes2", "4,3,2,1"]
    run(["umbilic", *q2, "--n", "200", "--out", str(out / "q2_locus.csv")])
    spec2 = qpc.QuadricSpec("Q2", (4.0, 3.0, 2.0, 1.0))
    seeds = census_seeds(spec2, 2, args.seed)
    run(["trace", *q2, "--foliation", "1", "--start=" + fmt_point(seeds[0]),
         "--out", str(out / "q2_leaf_f1.csv")])
    run(["trace", *q2, "--foliation", "2", "--start=" + fmt_point(seeds[1]),
         "--escape-radius", "8", "--out", str(out / "q2_leaf_f2.csv")])

    q0 = ["--family", "q0", "--semiaxes2", "4,3,1"]
    run(["umbilic3", *q0, "--out", str(out / "q0_umbilics.csv")])
    spec0 = qpc.QuadricSpec("q0", (4.0, 3.0, 1.0))
    seeds0 = census_seeds(spec0, 4, args.seed)
    for i, foliation in ((0, 1), (1, 1), (2, 2), (3, 2)):
        run(["trace", *q0, "--foliation", str(foliation),
             "--start=" + fmt_point(seeds0[i]),
             "--out", str(out / f"q0_leaf_f{foliation}_{i}.csv")])
    print(f"exports complete under {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
