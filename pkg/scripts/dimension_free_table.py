"""Print the coefficient C(n) = sqrt(n)/phi^-1(n) after isotropic rescaling, for several exponents."""
import argparse

from isoprof import Potential, dimension_free_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, nargs="+", default=[1.5, 2.0, 3.0])
    ap.add_argument("--n", type=int, nargs="+", default=[5, 10, 20, 50, 100, 200])
    args = ap.parse_args()

    for alpha in args.alpha:
        table = dimension_free_check(Potential.power(alpha), args.n)
        print(f"power({alpha:g})  [{table.hypothesis}]  max/min = {table.ratio:.6f}")
        for n, c in zip(args.n, table.coefficients):
            print(f"  n={n:<5d} C(n)={c:.6f}")


if __name__ == "__main__":
    main()
