"""Compare certified lower bounds with witness perimeters along a mass grid, one dimension at a time."""
import argparse

import numpy as np

from isoprof import Potential, certify
from isoprof.bounds import certificate_upper_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 10, 50])
    ap.add_argument("--points", type=int, default=10)
    args = ap.parse_args()

    p = Potential.power(args.alpha)
    for n in args.n:
        print(f"n={n}")
        print(f"  {'a':>10} {'lower':>12} {'upper':>12} {'route':>8}")
        for a in np.geomspace(1e-6, 0.5, args.points):
            cert = certify("auto", n, p, float(a))
            ub = certificate_upper_bound(cert, p)
            print(f"  {a:10.3g} {cert.value:12.5g} {ub:12.5g} {cert.route:>8}")


if __name__ == "__main__":
    main()
