"""Optimizer over the (d1, d2, p) grid for 1 <= p <= 2; writes one JSON report."""
import argparse
import json

from whp import suites


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=6)
    ap.add_argument("--out", default="multiplicativity_grid.json")
    args = ap.parse_args()
    rows = suites.multiplicativity_grid(restarts=args.restarts, seed=args.seed)
    with open(args.out, "w") as fh:
        json.dump({"seed": args.seed, "rows": rows}, fh, indent=2)
    worst = max(rows, key=lambda r: r["multiplicativity_gap"])
    print(f"{len(rows)} configs, worst gap {worst['multiplicativity_gap']:.3e} "
          f"at d1={worst['d1']} d2={worst['d2']} p={worst['p']}")


if __name__ == "__main__":
    main()
