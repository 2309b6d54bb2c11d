"""Rotation path of y onto the ray of x: norms, steps and the terminal lambda.

    python scripts/rotation_path.py --x 1 0 --y 0 0.5 [--n 64]
"""
import argparse
import csv
import json
import sys

from rkhsreg.theorem_lab import build_rotation_path, min_n_for_contraction


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x", type=float, nargs="+", default=[1.0, 0.0])
    ap.add_argument("--y", type=float, nargs="+", default=[0.0, 0.5])
    ap.add_argument("--n", type=int, help="steps (default: smallest n with lambda <= 1)")
    args = ap.parse_args()

    n_min = min_n_for_contraction(args.x, args.y)
    path = build_rotation_path(args.x, args.y, args.n or n_min)
    summary = {"n": path.n, "min_n": n_min, "lambda": path.lam,
               "lambda_squared_formula": path.lam_squared_formula,
               "invariant_errors": path.invariant_errors()}
    print(json.dumps(summary, indent=2), file=sys.stderr)
    rows = list(path.rows())
    w = csv.DictWriter(sys.stdout, fieldnames=["k", "norm", "angle_to_x", "step"],
                       extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
