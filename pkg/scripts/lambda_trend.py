"""lambda(gamma) along gamma = 2^k for the scalar family, against gamma / (gamma + 1).

    python scripts/lambda_trend.py [--profile square|power] [--p 3] [--loss squared_at_one]
"""
import argparse
import csv
import sys

import numpy as np

from rkhsreg.reduction import SCALAR_LOSSES, ScalarLoss, solve_scalar_family
from rkhsreg.regularizers import Power, Square
from rkhsreg.theorem_lab import GAMMA_SCHEDULE


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--profile", choices=["square", "power"], default="square")
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--loss", choices=sorted(SCALAR_LOSSES), default="squared_at_one")
    ap.add_argument("--x-norm", type=float, default=1.0)
    args = ap.parse_args()

    h = Square() if args.profile == "square" else Power(args.p)
    p = np.array([1.0 / args.x_norm])
    w = csv.writer(sys.stdout)
    w.writerow(["k", "gamma", "lambda", "closed_form", "abs_err"])
    for k, g in enumerate(GAMMA_SCHEDULE):
        lam = solve_scalar_family(p, ScalarLoss(args.loss), h, g).lam
        ref = g / (g + 1)
        w.writerow([k, g, repr(lam), repr(ref), f"{abs(lam - ref):.3e}"])


if __name__ == "__main__":
    main()
