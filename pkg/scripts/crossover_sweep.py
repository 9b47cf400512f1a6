"""Barycenter-minus-vertex excess across p, plus the crossover p* for several d."""
import argparse
import csv
import sys

import numpy as np

from whp.optimize import barycenter_excess, find_crossover


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--p-min", type=float, default=1.0)
    ap.add_argument("--p-max", type=float, default=8.0)
    ap.add_argument("--steps", type=int, default=29)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()

    writer = csv.writer(sys.stdout)
    writer.writerow(["d", "p", "excess"])
    for d in args.dims:
        for p in np.linspace(args.p_min, args.p_max, args.steps):
            writer.writerow([d, f"{p:.17g}", f"{barycenter_excess(d, p):.17g}"])
    for d in args.dims:
        try:
            p_star = find_crossover(d, 2.0, 50.0, args.tol)
            print(f"# d={d} p*={p_star:.10f}", file=sys.stderr)
        except ValueError:
            print(f"# d={d} no sign change in [2, 50]", file=sys.stderr)


if __name__ == "__main__":
    main()
