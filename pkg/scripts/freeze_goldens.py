"""Freeze the isotropic-coefficient ratios used by the regression goldens.

The coefficient sqrt(n) / phi_iso^-1(n) is computed from the Gamma-function
closed form of the isotropic scale, independently of the package's root
finder and quadrature, and written to tests/data/goldens.json.
"""
import json
import math
from pathlib import Path

from scipy.special import gammaln

N_GRID = [5, 10, 20, 50, 100, 200]


def iso_lambda(n, alpha):
    return math.sqrt(math.exp(gammaln((n + 2) / alpha) - gammaln(n / alpha)) / n)


def coefficient(n, alpha):
    # phi_lam^-1(n) = n^(1/alpha) / lam; phi^-1(1) = 1 for the unscaled power
    return math.sqrt(n) * iso_lambda(n, alpha) / n ** (1 / alpha)


def main():
    out = {"n_grid": N_GRID, "ratios": {}, "coefficients": {}}
    for alpha in (1.5, 2.0, 3.0):
        c = [coefficient(n, alpha) for n in N_GRID]
        out["coefficients"][f"{alpha:g}"] = c
        out["ratios"][f"{alpha:g}"] = max(c) / min(c)
    path = Path(__file__).resolve().parents[1] / "tests" / "data" / "goldens.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    for k, v in out["ratios"].items():
        print(f"power({k}): max/min = {v:.12g}")


if __name__ == "__main__":
    main()
