"""Lower bounds on isoperimetric profiles, each returned as a certificate.

Every construction rests on the log-concave inequality

    2 r P+(dA) >= a log(1/a) + (1-a) log(1/(1-a)) + log P(ball of radius r),

fed with ball masses from concentration around the mode (large sets) or
from the explicit tail bound (small sets), and on a cut-off tensorisation of
radial and spherical profiles for the full measure. A certificate whose
preconditions fail carries value 0, which is trivially a valid bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError
from .ledger import ASSUMED, DERIVED, ESTIMATED, ConstantsLedger, concentration
from .potential import Potential, check_hypotheses
from .profile import D_GRID, ProfileFn, gaussian_profile, l_phi
from .quadrature import DEFAULT_PLAN, QuadraturePlan
from .radial import RadialMeasure, cached_normalize, isotropic_lambda
from .witness import radial_profile, upper_bound

ROUTES = (
    "bobkov_direct",
    "prop_nu_big",
    "prop_small_h0",
    "prop_small_h2",
    "tensorized",
    "theorem_muphi",
    "theorem_mualpha",
)
# which law a certificate bounds: the radial law, the full measure, or both
RADIAL, FULL, BOTH = "radial", "full", "both"

_K_NUDGE = 1e-12
# grid on which C_nu = inf Is_nu / J is taken; dense near 1/2, geometric below
RADIAL_CONSTANT_GRID = tuple(sorted({0.5 - 0.05 * k for k in range(9)} | set(D_GRID)))


@dataclass
class BoundCertificate:
    a: float
    value: float
    route: str
    measure: str
    n: int
    potential: str
    constants_used: list = field(default_factory=list)
    validity: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(ok for _, ok in self.validity)

    def use(self, name: str, value: float, provenance: str):
        self.constants_used.append((name, float(value), provenance))

    def require(self, condition: str, ok: bool) -> bool:
        self.validity.append((condition, bool(ok)))
        return bool(ok)

    def constant(self, name: str) -> float:
        for n, v, _ in self.constants_used:
            if n == name:
                return v
        raise KeyError(name)

    def finalize(self, value: float) -> "BoundCertificate":
        self.value = float(value) if self.valid else 0.0
        return self

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "value": self.value,
            "route": self.route,
            "measure": self.measure,
            "n": self.n,
            "potential": self.potential,
            "constants_used": [
                {"name": n, "value": v, "provenance": p} for n, v, p in self.constants_used
            ],
            "validity": [{"condition": c, "pass": ok} for c, ok in self.validity],
        }


def _entropy(a: float) -> float:
    return -a * math.log(a) - (1 - a) * math.log1p(-a) if 0 < a < 1 else 0.0


def bobkov_bound(a: float, r: float, log_ball: float) -> float:
    """Lower bound on the boundary measure of a set of mass ``a``.

    ``log_ball`` is the log-mass of a ball of radius ``r`` (any centre); the
    result is clamped at 0 when the bracket is negative.
    """
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    return max(0.0, (_entropy(a) + log_ball) / (2.0 * r))


def _bracket(a: float, log_ball: float) -> float:
    """``(1-a) log(1/(1-a)) + log_ball``, the part that must stay non-negative."""
    return -(1 - a) * math.log1p(-a) + log_ball


# direct optimisation -----------------------------------------------------------


def bobkov_optimize(m: RadialMeasure, a: float, measure: str = RADIAL,
                    grid_size: int = 40) -> BoundCertificate:
    """Best log-concave bound over a log grid of radii, then a bounded refinement.

    For the radial law, balls are centred at 0 or at the mode; for the full
    measure only the origin is available (off-centre balls are not radial).
    Balls at the origin serve both laws at once.
    """
    p = m.potential
    cert = BoundCertificate(a, 0.0, "bobkov_direct", measure, m.n, p.name)
    if not cert.require("0 < a <= 1/2", 0 < a <= 0.5):
        return cert.finalize(0.0)
    centres = [0.0, m.r0] if measure == RADIAL and m.r0 > 0 else [0.0]
    r_lo = m.r0 / m.n if m.r0 > 0 else 0.01 * p.inverse(1.0)
    r_hi = 4.0 * p.inverse(2 * m.n)
    radii = np.geomspace(r_lo, r_hi, grid_size)

    def objective(centre, r):
        return bobkov_bound(a, r, m.log_interval_mass(centre - r, centre + r))

    best = (0.0, centres[0], radii[0])
    for c in centres:
        vals = [objective(c, r) for r in radii]
        i = int(np.argmax(vals))
        if vals[i] > best[0]:
            best = (vals[i], c, radii[i])
        if vals[i] > 0:
            lo, hi = radii[max(i - 1, 0)], radii[min(i + 1, grid_size - 1)]
            res = minimize_scalar(lambda x: -objective(c, math.exp(x)),
                                  bounds=(math.log(lo), math.log(hi)), method="bounded",
                                  options={"xatol": 1e-8})
            if -res.fun > best[0]:
                best = (-res.fun, c, math.exp(res.x))
    value, centre, radius = best
    if centre == 0.0:
        cert.measure = BOTH
    cert.use("ball_centre", centre, DERIVED)
    cert.use("ball_radius", radius, DERIVED)
    return cert.finalize(value)


# constant selection --------------------------------------------------------------


@dataclass(frozen=True)
class KSelection:
    """Selected K with the constraint functions it was chosen against (each must be >= 0)."""

    K: float
    constraints: tuple = field(repr=False)

    def slacks_at(self, K: float) -> dict:
        return {f"g{i + 1}": g(K) for i, g in enumerate(self.constraints)}

    @property
    def slacks(self) -> dict:
        return self.slacks_at(self.K)

    def satisfied(self, K: Optional[float] = None) -> bool:
        return all(v >= 0 for v in self.slacks_at(self.K if K is None else K).values())


def _select(constraints, lower: float, upper: float) -> KSelection:
    """Smallest K >= lower satisfying every upward-closed constraint ``g(K) >= 0``."""
    thresholds = [lower]
    for g in constraints:
        if g(lower) >= 0:
            continue
        hi = max(upper, 2 * lower)
        while g(hi) < 0:
            hi *= 2.0
        thresholds.append(brentq(g, lower, hi, xtol=1e-15, rtol=1e-15))
    K = max(thresholds)
    while not all(g(K) >= 0 for g in constraints):
        K *= 1 + _K_NUDGE
    return KSelection(K, tuple(constraints))


def select_k_small(c: float, regime: str) -> KSelection:
    """K for the small-set construction; constraints from the tail-ratio argument.

    h0: Kc >= 2, K - 1 >= 1/c, e K c exp(-(K-1) c) <= 1/2
    h2: Kc >= 2, K - 1 >= 1/(2c), e sqrt(Kc) exp(-(K-1) c) <= 1/2
    """
    if not c > 0:
        raise DomainError(f"split constant must be positive, got {c}")
    if regime == "h0":
        g3 = lambda K: -math.log(2) - (1 + math.log(K * c) - (K - 1) * c)  # noqa: E731
        g2 = lambda K: K - 1 - 1 / c  # noqa: E731
        start = 1 / c
    elif regime == "h2":
        g3 = lambda K: -math.log(2) - (1 + 0.5 * math.log(K * c) - (K - 1) * c)  # noqa: E731
        g2 = lambda K: K - 1 - 1 / (2 * c)  # noqa: E731
        start = 1 / (2 * c)
    else:
        raise DomainError(f"unknown regime {regime!r}")
    g1 = lambda K: K * c - 2  # noqa: E731
    # g3 is increasing only beyond `start`, where every feasible K lives (g2)
    return _select([g1, g2, g3], max(start, 1e-300), 2 * start + 2)


def select_k_big(C1: float) -> KSelection:
    """K for the large-set construction.

    K >= 1, K > log C1 / log 2 and the concave bracket
    (1-a) log(1/(1-a)) + log(1 - C1 a^K) is non-negative at a = 1/2.
    """
    g0 = lambda K: K - 1  # noqa: E731
    g1 = lambda K: K - math.log(C1) / math.log(2)  # noqa: E731

    def g2(K):
        x = C1 * 2.0**-K
        return -math.inf if x >= 1 else 0.5 * math.log(2) + math.log1p(-x)

    lower = max(1.0, math.log(C1) / math.log(2) + 1e-12)
    return _select([g0, g1, g2], lower, lower + 4)


def select_c1_cutoff(kappa1: float, c: float) -> float:
    """Smallest x >= 2 with max(kappa1, 1) e x exp(-x) <= exp(-c)."""
    h = lambda x: math.log(max(kappa1, 1.0)) + 1 + math.log(x) - x + c  # noqa: E731
    if h(2.0) <= 0:
        return 2.0
    hi = 4.0
    while h(hi) > 0:
        hi *= 2
    x = brentq(h, 2.0, hi, xtol=1e-15, rtol=1e-15)
    while h(x) > 0:
        x *= 1 + _K_NUDGE
    return x


def split_constant(ledger: ConstantsLedger, m: RadialMeasure) -> tuple[float, str]:
    """c separating small sets (a < exp(-cn)) from large ones.

    Defaults to c1/K from the concentration construction, which is the range
    where the large-set bound is available; n = 1 has no interior mode and
    gets c = log 2 so every a <= 1/2 is a small set.
    """
    if ledger.split_c is not None:
        return ledger.split_c, ASSUMED
    if m.n < 2:
        return math.log(2.0), DERIVED
    c1, C1, _ = concentration(ledger, m)
    return c1 / select_k_big(C1).K, DERIVED


# radial constructions -------------------------------------------------------------


def prop_nu_big(n: int, p: Potential, a: float, ledger: ConstantsLedger = ConstantsLedger(),
                plan: QuadraturePlan = DEFAULT_PLAN) -> BoundCertificate:
    """Large-set bound for the radial law: C sqrt(n)/phi^-1(n) a sqrt(log 1/a)."""
    cert = BoundCertificate(a, 0.0, "prop_nu_big", RADIAL, n, p.name)
    if not cert.require("n >= 2", n >= 2):
        return cert.finalize(0.0)
    m = cached_normalize(n, p, plan)
    c1, C1, prov = concentration(ledger, m)
    sel = select_k_big(C1)
    K = sel.K
    c = c1 / K
    cert.use("c1", c1, prov)
    cert.use("C1", C1, prov)
    cert.use("K", K, DERIVED)
    cert.use("c", c, DERIVED)
    cert.require("exp(-cn) < 1/2", math.exp(-c * n) < 0.5)
    cert.require("exp(-cn) <= a <= 1/2", math.exp(-c * n) <= a <= 0.5)
    if not cert.valid:
        return cert.finalize(0.0)
    log_inv_a = -math.log(a)
    delta = math.sqrt(K * log_inv_a / (c1 * n))
    r0 = m.r0
    log_ball = m.log_interval_mass(r0 * (1 - delta), r0 * (1 + delta))
    cert.use("delta", delta, DERIVED)
    cert.require("bracket at delta(a) >= 0", _bracket(a, log_ball) >= 0)
    const = 0.5 * math.sqrt(c1 / K)
    cert.use("C", const, DERIVED)
    return cert.finalize(const * math.sqrt(n) / p.inverse(n) * a * math.sqrt(log_inv_a))


def prop_small(n: int, p: Potential, a: float, c: float, regime: str,
               ledger: ConstantsLedger = ConstantsLedger(),
               plan: QuadraturePlan = DEFAULT_PLAN) -> BoundCertificate:
    """Small-set bound from balls at the origin and the explicit tail bound.

    Valid for the radial law and the full measure simultaneously.
    """
    cert = BoundCertificate(a, 0.0, f"prop_small_{regime}", BOTH, n, p.name)
    sel = select_k_small(c, regime)
    K = sel.K
    cert.use("c", c, DERIVED)
    cert.use("K", K, DERIVED)
    cert.require("0 < a <= min(exp(-cn), 1/2)", 0 < a <= min(math.exp(-c * n), 0.5))
    if regime == "h2":
        cert.require("potential satisfies H2", check_hypotheses(p, x_max=10 * p.inverse(1.0)).h2.holds)
    if not cert.valid:
        return cert.finalize(0.0)
    m = cached_normalize(n, p, plan)
    log_inv_a = -math.log(a)
    inv_n = p.inverse(n)
    if regime == "h0":
        r = p.inverse(K * log_inv_a)
        const = 1.0 / (2.0 * K)
        value = const * a * log_inv_a / p.inverse(log_inv_a)
    else:
        r = math.sqrt(K * inv_n**2 / n * log_inv_a)
        const = 1.0 / (2.0 * math.sqrt(K))
        value = const * a * math.sqrt(log_inv_a) * math.sqrt(n) / inv_n
    cert.use("r", r, DERIVED)
    cert.use("C", const, DERIVED)
    cert.require("r >= phi^-1(2n)", r >= p.inverse(2 * n) * (1 - 1e-12))
    cert.require("bracket at r(a) >= 0", _bracket(a, m.log_cdf(r)) >= 0)
    return cert.finalize(value)


def radial_certificate_value(m: RadialMeasure, a: float, regime: str, c: float,
                             ledger: ConstantsLedger) -> float:
    """Best valid closed-form radial lower bound at ``a`` (direct search as fallback)."""
    n, p = m.n, m.potential
    vals = [prop_small(n, p, a, c, regime, ledger, m.quad).value]
    if n >= 2 and a >= math.exp(-c * n):
        vals.append(prop_nu_big(n, p, a, ledger, m.quad).value)
    best = max(vals)
    if best <= 0:
        best = bobkov_optimize(m, a, RADIAL).value
    return best


def radial_constant(m: RadialMeasure, J: ProfileFn, regime: str, c: float,
                    ledger: ConstantsLedger, grid: Sequence[float] = RADIAL_CONSTANT_GRID) -> float:
    """C_nu = min over the grid of (best radial lower bound) / J(a)."""
    return min(radial_certificate_value(m, a, regime, c, ledger) / J(a) for a in grid)


def sphere_constant(n: int, J: ProfileFn, ledger: ConstantsLedger,
                    grid: Sequence[float] = RADIAL_CONSTANT_GRID) -> float:
    """C_sigma against J: sphere_coeff sqrt(n-1) times min_a Is_gamma(a)/J(a)."""
    base = ledger.sphere_coeff * math.sqrt(max(n - 1, 0))
    if J.kind == "gaussian":
        return base
    return base * min(gaussian_profile(a) / J(a) for a in grid)


# tensorisation ----------------------------------------------------------------------


def tensorize(C_nu: float, C_sigma: float, J: ProfileFn, nu: RadialMeasure, a: float,
              ledger: ConstantsLedger = ConstantsLedger(), c: Optional[float] = None) -> BoundCertificate:
    """Full-measure bound kappa2 min(C_nu, C_sigma / r2) J(a) from radial and sphere profiles.

    Cut-off radii: r1 = phi^-1(c1' n) with c1' the smallest x >= 2 such that
    max(kappa1, 1) e x exp(-x) <= exp(-c); r2 = r1 + 1/(C_nu J(1/2)). The
    tail condition kappa1 nu[r1, inf) <= a is checked with the explicit tail
    bound.
    """
    p = nu.potential
    cert = BoundCertificate(a, 0.0, "tensorized", FULL, nu.n, p.name)
    if c is None:
        c, c_prov = split_constant(ledger, nu)
    else:
        c_prov = DERIVED
    k1, k2 = ledger.kappa1, ledger.kappa2
    cert.use("kappa", ledger.kappa, ASSUMED)
    cert.use("kappa1", k1, DERIVED)
    cert.use("kappa2", k2, DERIVED)
    cert.use("c", c, c_prov)
    cert.use("C_nu", C_nu, DERIVED)
    cert.use("C_sigma", C_sigma, ASSUMED)
    cert.require("0 < a <= 1/2", 0 < a <= 0.5)
    cert.require("C_nu > 0", C_nu > 0)
    cert.require("C_sigma > 0", C_sigma > 0)
    if not cert.valid:
        return cert.finalize(0.0)
    c1p = select_c1_cutoff(k1, c)
    r1 = p.inverse(c1p * nu.n)
    r2 = r1 + 1.0 / (C_nu * J(0.5))
    cert.use("c1_cutoff", c1p, DERIVED)
    cert.use("r1", r1, DERIVED)
    cert.use("r2", r2, DERIVED)
    cert.require("r2 - r1 >= 1/(C_nu J(1/2))", r2 - r1 >= (1.0 / (C_nu * J(0.5))) * (1 - 1e-12))
    log_tail_r1 = nu.log_tail_bound(r1)
    cert.use("tail_bound_r1", math.exp(log_tail_r1), DERIVED)
    cert.require("kappa1 nu[r1, inf) <= a", math.log(k1) + log_tail_r1 <= math.log(a))
    return cert.finalize(k2 * min(C_nu, C_sigma / r2) * J(a))


# assembled theorems ---------------------------------------------------------------------


@dataclass(frozen=True)
class _Setup:
    regime: str
    scale: float
    q: Potential
    J: ProfileFn
    hypothesis: str


@lru_cache(maxsize=256)
def _setup(p: Potential) -> Optional[_Setup]:
    s = p.inverse(1.0)
    q = p.rescaled(s)
    report = check_hypotheses(q, x_max=10.0)
    if report.h1_prime.holds:
        return _Setup("h0", s, q, ProfileFn.i_phi(q), "h1_prime")
    if report.h2.holds:
        return _Setup("h2", s, q, ProfileFn.gaussian(), "h2")
    return None


_CONSTANT_CACHE: dict = {}


def _theorem_constants(n, setup, ledger, plan):
    key = (n, setup.q, ledger, plan)
    if key not in _CONSTANT_CACHE:
        m = cached_normalize(n, setup.q, plan)
        c, c_prov = split_constant(ledger, m)
        C_nu = radial_constant(m, setup.J, setup.regime, c, ledger)
        C_sigma = sphere_constant(n, setup.J, ledger)
        _CONSTANT_CACHE[key] = (m, c, c_prov, C_nu, C_sigma)
    return _CONSTANT_CACHE[key]


def theorem_muphi(n: int, p: Potential, a: float, ledger: ConstantsLedger = ConstantsLedger(),
                  plan: QuadraturePlan = DEFAULT_PLAN, route: str = "auto") -> BoundCertificate:
    """Lower bound on the profile of the full measure at ``a``.

    Works with the rescaled potential q(x) = phi(phi^-1(1) x), for which
    phi(1) = 1, and converts back through the linear scaling of profiles.
    Large sets (a >= exp(-cn)) go through the tensorisation, small sets
    through the origin-ball construction. ``route`` may force ``tensor`` or
    ``small``.
    """
    b = min(a, 1.0 - a)
    cert = BoundCertificate(a, 0.0, "theorem_muphi", FULL, n, p.name)
    if not cert.require("0 < a < 1", 0 < b):
        return cert.finalize(0.0)
    setup = _setup(p)
    if not cert.require("potential satisfies H1' or H2", setup is not None):
        return cert.finalize(0.0)
    m, c, c_prov, C_nu, C_sigma = _theorem_constants(n, setup, ledger, plan)
    s = setup.scale
    cert.use("phi_inv_1", s, DERIVED)
    large = b >= math.exp(-c * n)
    if route == "tensor" or (route == "auto" and large):
        inner = tensorize(C_nu, C_sigma, setup.J, m, b, ledger, c=c)
        sub_route = "tensorized"
    else:
        inner = prop_small(n, setup.q, b, c, setup.regime, ledger, plan)
        sub_route = inner.route
    cert.constants_used += [(k, v, pr) for k, v, pr in inner.constants_used if k != "c"]
    cert.use("c", c, c_prov)
    cert.use("hypothesis", 1.0 if setup.hypothesis == "h1_prime" else 2.0, DERIVED)
    cert.validity += inner.validity
    cert.validity.append((f"sub-route {sub_route}", True))
    value = inner.value / s
    inv_n = p.inverse(n)
    if setup.hypothesis == "h1_prime":
        shape = math.sqrt(n) / inv_n * s * l_phi(p, b)
    else:
        shape = math.sqrt(n) / inv_n * b * math.sqrt(-math.log(b))
    cert.finalize(value)
    cert.use("theorem_C", cert.value / shape if shape > 0 else 0.0, DERIVED)
    return cert


def theorem_mualpha(n: int, alpha: float, a: float, ledger: ConstantsLedger = ConstantsLedger(),
                    plan: QuadraturePlan = DEFAULT_PLAN) -> BoundCertificate:
    """Power-potential specialisation: prefactor n^(1/2 - 1/alpha), exponent 1 - 1/min(alpha, 2)."""
    cert = theorem_muphi(n, Potential.power(alpha), a, ledger, plan)
    cert.route = "theorem_mualpha"
    b = min(a, 1.0 - a)
    prefactor = n ** (0.5 - 1.0 / alpha)
    exponent = 1.0 - 1.0 / min(alpha, 2.0)
    cert.use("prefactor", prefactor, DERIVED)
    cert.use("exponent", exponent, DERIVED)
    if b > 0:
        shape = prefactor * b * (-math.log(b)) ** exponent
        cert.use("theorem_alpha_C", cert.value / shape, DERIVED)
    return cert


# dimension-free behaviour under isotropic scaling --------------------------------------


@dataclass
class DimensionFreeTable:
    hypothesis: str
    rows: list  # (n, lambda_star, coefficient, coefficient_scaled_profile)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([r[2] for r in self.rows])

    @property
    def ratio(self) -> float:
        c = self.coefficients
        return float(c.max() / c.min())


def dimension_free_check(p: Potential, n_list: Sequence[int], a_grid: Optional[Sequence[float]] = None,
                         ledger: ConstantsLedger = ConstantsLedger(),
                         plan: QuadraturePlan = DEFAULT_PLAN) -> DimensionFreeTable:
    """n-dependent coefficient of the theorem bound after isotropic rescaling.

    coefficient = sqrt(n) / phi_iso^-1(n), times phi^-1(1) of the original
    potential under H1' (the profile is then expressed through the original
    phi). The last column multiplies by phi_iso^-1(1) instead, i.e. expresses
    the profile through the rescaled potential. With ``a_grid``, a fifth
    column holds the smallest certified implied constant over the grid.
    """
    report = check_hypotheses(p, x_max=10 * p.inverse(1.0))
    hyp = "h2_prime" if report.h2_prime.holds else "h1_prime" if report.h1_prime.holds else "none"
    rows = []
    for n in n_list:
        lam = isotropic_lambda(n, p, plan)
        q = p.with_lambda(lam)
        coeff = math.sqrt(n) / q.inverse(n)
        scaled = coeff * q.inverse(1.0)
        if hyp == "h1_prime":
            coeff *= p.inverse(1.0)
        row = [n, lam, coeff, scaled]
        if a_grid is not None:
            row.append(min(theorem_muphi(n, q, a, ledger, plan).constant("theorem_C") for a in a_grid))
        rows.append(tuple(row))
    return DimensionFreeTable(hyp, rows)


# dispatch and soundness ------------------------------------------------------------------


def certify(route: str, n: int, p: Potential, a: float, ledger: ConstantsLedger = ConstantsLedger(),
            plan: QuadraturePlan = DEFAULT_PLAN) -> BoundCertificate:
    """Certificate for one named route (``auto|bobkov|big|small|tensor``) at mass ``a``."""
    b = min(a, 1.0 - a)
    if route == "auto":
        return theorem_muphi(n, p, a, ledger, plan)
    if route == "bobkov":
        return bobkov_optimize(cached_normalize(n, p, plan), b, FULL)
    if route == "big":
        return prop_nu_big(n, p, b, ledger, plan)
    if route in ("small", "tensor"):
        cert = theorem_muphi(n, p, a, ledger, plan, route=route)
        cert.route = "tensorized" if route == "tensor" else cert.route
        if route == "small":
            setup = _setup(p)
            cert.route = f"prop_small_{setup.regime}" if setup else "prop_small_h0"
            cert.measure = BOTH
        return cert
    raise DomainError(f"unknown route {route!r}")


def certificate_upper_bound(cert: BoundCertificate, p: Potential,
                            plan: QuadraturePlan = DEFAULT_PLAN) -> float:
    """Witness upper bound on the profile that the certificate claims to bound."""
    a = min(cert.a, 1.0 - cert.a)
    m = cached_normalize(cert.n, p, plan)
    if cert.measure == RADIAL:
        return radial_profile(m, a)
    full = upper_bound(cert.n, p, a, plan, m=m)
    if cert.measure == BOTH:
        return min(full, radial_profile(m, a))
    return full
