"""Exit criteria, each at its pinned tolerance; one summary line per criterion."""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.special import gammaln

import isoprof
from isoprof.bounds import certificate_upper_bound, certify, dimension_free_check
from isoprof.cli import main
from isoprof.potential import Potential, check_hypotheses, lemma21_check
from isoprof.profile import estimate_d1_d2, i_phi
from isoprof.radial import cached_normalize, isotropic_lambda, klartag_fit, log_outside_mass
from isoprof.witness import halfspace_witness, upper_bound

DIMS = (2, 5, 10, 50, 200)
ALPHAS = (1.0, 1.5, 2.0, 3.0)
GOLDENS = json.loads((Path(__file__).parent / "data" / "goldens.json").read_text())


def test_criterion_1_exponential_exactness(criterion):
    isoprof.clear_caches()
    start = time.perf_counter()
    p = Potential.power(1)
    grid = np.linspace(0.01, 0.99, 50)
    err_profile = max(abs(i_phi(p, a) - min(a, 1 - a)) for a in grid)
    err_half = max(abs(halfspace_witness(1, p, a).perimeter - min(a, 1 - a)) for a in grid)
    elapsed = time.perf_counter() - start
    ok = err_profile <= 1e-8 and err_half <= 1e-8 and elapsed < 1.0
    assert criterion(1, ok, f"max |I-min(a,1-a)|={err_profile:.2e}, halfspace={err_half:.2e}, {elapsed:.2f}s")


def test_criterion_2_tail_bound_domination(criterion):
    isoprof.clear_caches()
    start = time.perf_counter()
    worst_tail = math.inf
    literal, with_n = [], math.inf
    for n in DIMS:
        for alpha in ALPHAS:
            p = Potential.power(alpha)
            m = cached_normalize(n, p)
            for r in np.linspace(p.inverse(2 * n), m.r_max, 200):
                worst_tail = min(worst_tail, m.tail_bound(r) - m.tail(r))
            target = n * (math.log(p.inverse(n)) - 1)
            if m.log_z_rad < target:
                literal.append((n, alpha, m.log_z_rad - target))
            # the same bound for int_0^inf n t^(n-1) e^-phi = n Z_rad, reported alongside
            with_n = min(with_n, m.log_z_rad + math.log(n) - target)
    elapsed = time.perf_counter() - start
    ok = worst_tail >= -1e-12 and not literal and elapsed < 30
    detail = f"min tail slack={worst_tail:.2e}, {elapsed:.1f}s; log Z_rad >= n(log phi^-1(n)-1) "
    if literal:
        n, a, gap = literal[0]
        detail += f"violated in {len(literal)} cells, first n={n} alpha={a:g} gap={gap:.3g}"
    else:
        detail += "holds"
    detail += f"; with +log n min slack={with_n:.3g}"
    assert criterion(2, ok, detail)


def test_criterion_3_growth_inequalities(criterion):
    start = time.perf_counter()
    worst, count = math.inf, 0
    x_grid = np.geomspace(1e-3, 10.0, 64)
    for alpha in (1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0):
        p = Potential.power(alpha)
        report = check_hypotheses(p, x_max=160.0)
        for t in (1.0, 1.5, 2.0, 4.0):
            for x in x_grid:
                for chk in lemma21_check(p, t, float(x), report).values():
                    worst = min(worst, chk.slack)
                    count += 1
    elapsed = time.perf_counter() - start
    ok = worst >= -1e-9 and elapsed < 5
    assert criterion(3, ok, f"{count} inequalities, min slack={worst:.2e}, {elapsed:.2f}s")


def test_criterion_4_mode(criterion):
    worst_id, worst_upper = 0.0, math.inf
    chain_failures = []
    for alpha in (1.0, 2.0, 3.0):
        p = Potential.power(alpha)
        for n in range(2, 201):
            r0 = cached_normalize(n, p).mode()
            exact = ((n - 1) / alpha) ** (1 / alpha)
            worst_id = max(worst_id, abs(r0 - exact) / exact)
            worst_upper = min(worst_upper, p.inverse(n) - r0)
            if n >= 2 * alpha + 1 and r0 < math.exp(-1 / math.e) * p.inverse(n):
                chain_failures.append((alpha, n, r0 / p.inverse(n)))
    ok = worst_id <= 1e-10 and worst_upper >= 0 and not chain_failures
    detail = f"identity rel err={worst_id:.1e}, min phi^-1(n)-mode={worst_upper:.3g}"
    if chain_failures:
        a, n, ratio = chain_failures[0]
        detail += (f"; mode >= exp(-1/e) phi^-1(n) violated in {len(chain_failures)} cases, "
                   f"first alpha={a:g} n={n}: ratio {ratio:.4f} < {math.exp(-1 / math.e):.4f}")
    assert criterion(4, ok, detail)


def test_criterion_5_isotropy(criterion):
    worst = 0.0
    for n in (2, 10, 50):
        for alpha in (1.0, 2.0, 3.0):
            lam = isotropic_lambda(n, Potential.power(alpha))
            exact = math.sqrt(math.exp(gammaln((n + 2) / alpha) - gammaln(n / alpha)) / n)
            worst = max(worst, abs(lam - exact) / exact)
    gauss = max(abs(isotropic_lambda(n, Potential.power(2)) * math.sqrt(2) - 1) for n in (2, 10, 50))
    ok = worst <= 1e-6 and gauss <= 1e-6
    assert criterion(5, ok, f"max rel err vs Gamma oracle={worst:.1e}, alpha=2 vs 1/sqrt(2)={gauss:.1e}")


@pytest.mark.slow
def test_criterion_6_sandwich(criterion):
    masses = np.geomspace(1e-6, 0.5, 12)
    checked, valid, worst, bad = 0, 0, math.inf, []
    for n in DIMS:
        for alpha in ALPHAS:
            p = Potential.power(alpha)
            for a in masses:
                for route in ("auto", "bobkov", "big", "small", "tensor"):
                    cert = certify(route, n, p, float(a))
                    checked += 1
                    if not cert.valid:
                        continue
                    valid += 1
                    ub = certificate_upper_bound(cert, p)
                    slack = ub * (1 + 1e-6) - cert.value
                    worst = min(worst, slack / ub)
                    if slack < 0:
                        bad.append((n, alpha, a, route))
    ok = not bad and valid > 0
    assert criterion(6, ok, f"{valid}/{checked} valid certificates, none above witness "
                            f"(min relative headroom {worst:.3g})" if ok else f"violations: {bad[:5]}")


def test_criterion_7_concentration_fit(criterion):
    held_out = np.linspace(0.015, 0.995, 67)
    worst_gap, worst_c1 = math.inf, math.inf
    for n in (10, 50, 200):
        for alpha in (1.0, 2.0, 3.0):
            m = cached_normalize(n, Potential.power(alpha))
            fit = klartag_fit(m)
            worst_c1 = min(worst_c1, fit.c1_hat)
            lp = np.array([log_outside_mass(m, d) for d in held_out])
            worst_gap = min(worst_gap, float(np.min(np.log(fit.envelope(n, held_out)) - lp)))
    ok = worst_c1 > 0 and worst_gap >= 0
    assert criterion(7, ok, f"min c1={worst_c1:.3g}, min held-out log-gap={worst_gap:.2e}")


def test_criterion_8_dimension_free(criterion):
    n_grid = GOLDENS["n_grid"]
    gauss = dimension_free_check(Potential.power(2), list(range(5, 201)))
    spread = gauss.ratio - 1
    ratios = {}
    for alpha in (3.0, 1.5):
        ratios[alpha] = dimension_free_check(Potential.power(alpha), n_grid).ratio
    ok = spread < 0.01
    for alpha, r in ratios.items():
        golden = GOLDENS["ratios"][f"{alpha:g}"]
        ok = ok and r <= golden * (1 + 1e-8)
    assert criterion(8, ok, f"power(2) spread={spread:.1e}; power(3) {ratios[3.0]:.6f} "
                            f"(golden {GOLDENS['ratios']['3']:.6f}); power(1.5) {ratios[1.5]:.6f} "
                            f"(golden {GOLDENS['ratios']['1.5']:.6f})")


def test_criterion_9_profile_properties(criterion):
    worst_concave, worst_sym, worst_end = -math.inf, 0.0, 0.0
    d_ok = True
    grid = np.linspace(0, 1, 200)
    for alpha in (1.0, 1.2, 1.5, 2.0):
        p = Potential.power(alpha)
        v = np.array([i_phi(p, a) for a in grid])
        worst_concave = max(worst_concave, float(np.max(v[:-2] - 2 * v[1:-1] + v[2:])))
        worst_sym = max(worst_sym, float(np.max(np.abs(v - v[::-1]))))
        worst_end = max(worst_end, abs(v[0]), abs(v[-1]))
        d = estimate_d1_d2(p)
        d_ok = d_ok and d.d1_hat > 0 and math.isfinite(d.d2_hat)
    ok = worst_concave <= 1e-12 and worst_sym <= 1e-12 and worst_end == 0 and d_ok
    assert criterion(9, ok, f"max second difference={worst_concave:.1e}, asymmetry={worst_sym:.1e}, "
                            f"endpoints={worst_end}, d1/d2 finite={d_ok}")


def test_criterion_10_reproducibility(criterion, tmp_path):
    cfg = tmp_path / "repro.ini"
    cfg.write_text(
        "[potential]\nalpha = [1, 2.5]\nlambda = isotropic\n\n"
        "[sweep]\nn_list = [2, 7, 40]\na_grid = \"1e-5:0.5:6\"\na_spacing = log\nseed = 123\nmc_count = 800\n"
    )
    runs = []
    for k in range(2):
        isoprof.clear_caches()
        out = tmp_path / f"run{k}"
        code = main(["--quiet", "--config", str(cfg), "--out", str(out), "sweep"])
        runs.append((code, {f: (out / f).read_bytes() for f in ("bounds.csv", "checks.csv")}))
    same = runs[0][1] == runs[1][1]
    ok = same and runs[0][0] == 0 and runs[1][0] == 0
    assert criterion(10, ok, f"byte-identical bounds.csv and checks.csv: {same}; exit codes "
                             f"{runs[0][0]}, {runs[1][0]}")
