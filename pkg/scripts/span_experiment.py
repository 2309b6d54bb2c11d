"""Brute-force minimizers and their distance to the span of the data functional.

    python scripts/span_experiment.py [--gamma 4] [--scale 0.2]
"""
import argparse

import numpy as np

from rkhsreg.reduction import ScalarLoss
from rkhsreg.regularizers import AnisotropicQuadratic, ShiftedNorm, catalogue
from rkhsreg.theorem_lab import representer_span_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, default=4.0)
    ap.add_argument("--scale", type=float, default=0.2, help="W = scale * (1, 1, 1)")
    args = ap.parse_args()

    W = args.scale * np.ones((1, 3))
    regs = [R for R, _ in catalogue() if R.is_radial]
    regs += [AnisotropicQuadratic([1.0, 4.0, 9.0]), ShiftedNorm([1.0, 0.0, 0.0])]
    print(f"{'regularizer':<34}{'span_distance':>15}{'J(min)':>12}{'J(proj)':>12}")
    for R in regs:
        rep = representer_span_experiment(R, W, ScalarLoss(), args.gamma)
        print(f"{R.label:<34}{rep.span_distance:>15.3e}{rep.J_at_min:>12.6f}"
              f"{rep.J_at_projection:>12.6f}")


if __name__ == "__main__":
    main()
