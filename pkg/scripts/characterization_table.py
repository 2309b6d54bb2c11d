"""Sampling verdicts for every catalogue regularizer: orthogonal monotonicity,
ray monotonicity, equal-norm invariance.

    python scripts/characterization_table.py [--trials 10000] [--seed 0]
"""
import argparse

from rkhsreg.regularizers import catalogue, characterization_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'regularizer':<34}{'dim':>4}{'orth':>7}{'ray':>7}{'norm':>7}{'agree':>7}")
    for R, n in catalogue():
        rep = characterization_check(R, n, args.trials, args.seed)
        row = [rep.orthogonal.holds, rep.ray.holds, rep.equal_norm.holds, rep.agree]
        print(f"{R.label:<34}{n:>4}" + "".join(f"{str(v):>7}" for v in row))


if __name__ == "__main__":
    main()
