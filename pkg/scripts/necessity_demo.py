"""Follow lambda(gamma) for a radial and a non-radial regularizer side by side.

For the anisotropic witness, R(lambda x) climbs towards R(x) = 5 while
R(x + y) = 3.25 stays below it, which is the inequality the necessity
argument rules out for regularizers with a representer theorem.

    python scripts/necessity_demo.py
"""
import csv
import sys

from rkhsreg.regularizers import ANISOTROPIC_WITNESS, AnisotropicQuadratic, Radial, Square
from rkhsreg.theorem_lab import necessity_probe


def main():
    x, y = ANISOTROPIC_WITNESS["x"], ANISOTROPIC_WITNESS["y"]
    reports = [necessity_probe(Radial(Square()), x, y),
               necessity_probe(AnisotropicQuadratic(ANISOTROPIC_WITNESS["weights"]), x, y)]
    w = csv.writer(sys.stdout)
    w.writerow(["regularizer", "gamma", "lambda", "omega_lambda_x", "omega_x_plus_y"])
    for rep in reports:
        for row in rep.rows():
            w.writerow([rep.regularizer, row["gamma"], repr(row["lambda"]),
                        repr(row["omega_lambda_x"]), rep.omega_x_plus_y])
    for rep in reports:
        print(f"{rep.regularizer}: bound {rep.bound_holds}, ray values {rep.eq6_holds}, "
              f"liminf {rep.liminf:.6g} vs R(x+y) {rep.omega_x_plus_y:.6g} -> "
              f"{rep.liminf_holds}", file=sys.stderr)
    print(reports[0].note, file=sys.stderr)


if __name__ == "__main__":
    main()
