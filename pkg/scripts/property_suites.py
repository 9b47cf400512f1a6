"""Schur-convexity and divided-difference property suites, dumped as JSON."""
import argparse
import json

from whp import suites


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--probes", type=int, default=1000)
    ap.add_argument("--out", default="property_suites.json")
    args = ap.parse_args()
    report = {
        "oracle": suites.oracle_equivalence(500, args.seed),
        "schur": suites.schur_suite(pairs=args.pairs, seed=args.seed),
        "lemma": suites.divided_difference_suite(probes=args.probes, seed=args.seed),
    }
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2)
    violations = sum(r["violations"] for r in report["schur"])
    lemma = report["lemma"]
    print(f"schur violations: {violations}; derivatives negative: "
          f"{lemma['negative']}/{lemma['derivatives_checked']}")


if __name__ == "__main__":
    main()
