"""The radial law of ``|X|`` for X with density proportional to exp(-phi(|x|)) on R^n.

The radial density is ``r**(n-1) * exp(-phi(r)) / Z`` on ``[0, inf)``. The
sphere-area factor of the full measure cancels in every probability, so only
the radial normalizer ``log Z`` is stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import gammaln

from .errors import DomainError, FitError, PreconditionError, RootFindingError
from .potential import Potential
from .quadrature import DEFAULT_PLAN, QuadraturePlan, log_integrate

LOG_HALF = math.log(0.5)
# log-units below the peak beyond which an upper integration limit is cut
_CUT_DEPTH = 80.0
# truncation radius: first r past phi^-1(n) with log F(r) below this
_TAIL_LOG_TARGET = -50.0
_TAIL_LOG_MARGIN = 10.0


def log_sphere_area(n: int) -> float:
    """log of the surface area of the unit sphere in R^n."""
    return math.log(2.0) + 0.5 * n * math.log(math.pi) - gammaln(0.5 * n)


def solve_mode(p: Potential, m: float) -> float:
    """Solve ``r * phi'(r) = m`` (maximiser of ``r**m * exp(-phi(r))``)."""
    if m <= 0:
        return 0.0
    hi = p.inverse(m + 1.0)
    # phi(x) <= x phi'(x) puts the root below phi^-1(m + 1)
    h = lambda r: r * p.deriv(r) - m  # noqa: E731
    lo = 0.5 * hi
    while h(lo) >= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise RootFindingError("mode bracket collapsed to 0", bracket=(lo, hi))
    if h(hi) <= 0:
        raise RootFindingError("mode equation has no sign change", bracket=(lo, hi))
    return brentq(h, lo, hi, xtol=1e-300, rtol=1e-14, maxiter=500)


def log_tail_bound_formula(n: int, p: Potential, r: float) -> float:
    """``log F(r) = n (1 + log r - log phi^-1(n)) - phi(r)`` with no range check."""
    return n * (1.0 + math.log(r) - math.log(p.inverse(n))) - p.eval(r)


@dataclass(frozen=True)
class TailFit:
    c1_hat: float
    C1_hat: float
    deltas: np.ndarray = field(repr=False)
    log_p: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    def envelope(self, n: int, delta):
        return self.C1_hat * np.exp(-self.c1_hat * n * np.asarray(delta) ** 2)


@dataclass(frozen=True, eq=False)
class RadialMeasure:
    n: int
    potential: Potential
    log_z_rad: float
    r_max: float
    quad: QuadraturePlan = DEFAULT_PLAN
    r0: float = 0.0

    # integrand ----------------------------------------------------------
    def _logf(self, k: float = 0.0):
        power = self.n - 1 + k
        phi = self.potential.eval
        if power == 0:
            return lambda r: -phi(r)

        def logf(r):
            with np.errstate(divide="ignore"):
                return power * np.log(r) - phi(r)

        return logf

    def _seeds(self, k: float = 0.0):
        p = self.potential
        peak = self.r0 if k == 0 else solve_mode(p, self.n - 1 + k)
        return peak, [0.5 * peak, peak, 2 * peak, p.inverse(self.n), p.inverse(2 * self.n)]

    def _upper(self, start: float, k: float = 0.0) -> float:
        peak, _ = self._seeds(k)
        logf = self._logf(k)
        top = float(logf(np.array(max(start, peak))))
        u = max(self.r_max, start, peak)
        while float(logf(np.array(u))) > top - _CUT_DEPTH:
            u *= 1.5
        return u

    def _log_mass(self, lo: float, hi: float, k: float = 0.0) -> float:
        """log of the integral of the unnormalised density over [lo, hi]."""
        _, seeds = self._seeds(k)
        return log_integrate(self._logf(k), lo, hi, seeds, self.quad)

    def _log_lower(self, r: float) -> float:
        return self._log_mass(0.0, r) - self.log_z_rad

    def _log_upper(self, r: float) -> float:
        return self._log_mass(r, self._upper(r)) - self.log_z_rad

    # public queries -----------------------------------------------------
    def log_density(self, r):
        ra = np.asarray(r, dtype=float)
        if np.any(ra <= 0):
            raise DomainError(f"radial density requires r > 0, got {r}")
        out = self._logf()(ra) - self.log_z_rad
        return float(out) if np.ndim(out) == 0 else out

    def density(self, r):
        return np.exp(self.log_density(r))

    def log_cdf_tail(self, r: float) -> tuple[float, float]:
        """(log cdf(r), log tail(r)), the smaller side computed by direct quadrature."""
        if r < 0:
            raise DomainError(f"cdf requires r >= 0, got {r}")
        if r == 0:
            return -math.inf, 0.0
        if r <= self.r0:
            lc = self._log_lower(r)
            if lc <= LOG_HALF:
                return lc, math.log1p(-math.exp(lc))
            lt = self._log_upper(r)
            return math.log1p(-math.exp(lt)), lt
        lt = self._log_upper(r)
        if lt <= LOG_HALF:
            return math.log1p(-math.exp(lt)), lt
        lc = self._log_lower(r)
        return lc, math.log1p(-math.exp(min(lc, 0.0)))

    def log_cdf(self, r: float) -> float:
        return self.log_cdf_tail(r)[0]

    def log_tail(self, r: float) -> float:
        return self.log_cdf_tail(r)[1]

    def cdf(self, r: float) -> float:
        return math.exp(self.log_cdf(r))

    def tail(self, r: float) -> float:
        return math.exp(self.log_tail(r))

    def log_interval_mass(self, lo: float, hi: float) -> float:
        """log nu([lo, hi]) with relative accuracy for both tiny and near-full intervals."""
        lo = max(lo, 0.0)
        if hi <= lo:
            return -math.inf
        outside = np.logaddexp(self.log_cdf(lo) if lo > 0 else -math.inf, self.log_tail(hi))
        if outside <= LOG_HALF:
            return math.log1p(-math.exp(outside))
        return self._log_mass(lo, hi) - self.log_z_rad

    def quantile(self, u: float) -> float:
        if not 0 < u < 1:
            raise DomainError(f"quantile requires u in (0, 1), got {u}")
        if u <= 0.5:
            return self.quantile_log_cdf(math.log(u))
        return self.quantile_log_tail(math.log1p(-u))

    def quantile_log_cdf(self, log_u: float) -> float:
        """r with log cdf(r) = log_u; use for lower-tail targets."""
        return self._bracket_solve(lambda r: self._log_lower(r) - log_u)

    def quantile_log_tail(self, log_t: float) -> float:
        """r with log tail(r) = log_t; keeps relative accuracy for tiny tails."""
        return self._bracket_solve(lambda r: log_t - self._log_upper(r))

    def _bracket_solve(self, f) -> float:
        guess = self.r0 if self.r0 > 0 else self.potential.inverse(1.0)
        lo, hi = guess, guess
        while f(hi) < 0:
            hi *= 2.0
        while f(lo) > 0:
            lo *= 0.5
            if lo < 1e-300:
                raise RootFindingError("quantile bracket collapsed to 0", bracket=(lo, hi))
        if lo == hi:
            return lo
        return brentq(f, lo, hi, xtol=1e-300, rtol=1e-14, maxiter=500)

    def mode(self) -> float:
        return self.r0

    def tail_bound(self, r: float) -> float:
        return math.exp(self.log_tail_bound(r))

    def log_tail_bound(self, r: float) -> float:
        threshold = self.potential.inverse(2 * self.n)
        if r < threshold * (1 - 1e-12):
            raise PreconditionError(
                f"tail bound requires r >= phi^-1(2n) = {threshold:.17g}, got r = {r:.17g}"
            )
        return log_tail_bound_formula(self.n, self.potential, r)

    def log_moment(self, k: float) -> float:
        if not k >= 1:
            raise DomainError(f"moment order must be >= 1, got {k}")
        return self._log_mass(0.0, self._upper(0.0, k), k) - self.log_z_rad

    def moment(self, k: float) -> float:
        return math.exp(self.log_moment(k))

    def klartag_fit(self, deltas: Optional[Sequence[float]] = None,
                    C1: Optional[float] = None) -> TailFit:
        return klartag_fit(self, deltas, C1)


def normalize(n: int, p: Potential, plan: QuadraturePlan = DEFAULT_PLAN) -> RadialMeasure:
    if n < 1 or int(n) != n:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    n = int(n)
    r0 = solve_mode(p, n - 1)
    inv_n, inv_2n = p.inverse(n), p.inverse(2 * n)
    target = _TAIL_LOG_TARGET - _TAIL_LOG_MARGIN
    g = lambda r: log_tail_bound_formula(n, p, r) - target  # noqa: E731
    hi = 2.0 * inv_n
    while g(hi) > 0:
        hi *= 2.0
    r_tail = brentq(g, inv_n, hi, rtol=1e-12)
    r_max = max(inv_2n, r_tail)
    m = RadialMeasure(n, p, 0.0, r_max, plan, r0)
    log_z = m._log_mass(0.0, m._upper(0.0))
    return RadialMeasure(n, p, log_z, r_max, plan, r0)


_normalize_cached = lru_cache(maxsize=512)(normalize)


def cached_normalize(n: int, p: Potential, plan: QuadraturePlan = DEFAULT_PLAN) -> RadialMeasure:
    """Memoised :func:`normalize`; measures are immutable so sharing is safe."""
    return _normalize_cached(int(n), p, plan)


def isotropic_lambda(n: int, p: Potential, plan: QuadraturePlan = DEFAULT_PLAN) -> float:
    """Scale lambda such that E|X|^2 = n under the rescaled potential.

    The second moment scales like ``lambda**-2``, which gives the starting
    point; a bracketed root search on ``log lambda`` then pins the defining
    equation to the quadrature accuracy.
    """
    log_n = math.log(n)

    def f(log_lam):
        m = normalize(n, p.with_lambda(math.exp(log_lam)), plan)
        return m.log_moment(2) - log_n

    m2 = normalize(n, p, plan).moment(2)
    x0 = math.log(p.lam) + 0.5 * (math.log(m2) - log_n)
    lo, hi = x0 - 0.05, x0 + 0.05
    flo, fhi = f(lo), f(hi)
    while flo < 0:
        lo -= 0.5
        flo = f(lo)
    while fhi > 0:
        hi += 0.5
        fhi = f(hi)
    return math.exp(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14))


def log_outside_mass(m: RadialMeasure, delta: float) -> float:
    """log nu{|r - r0| >= delta r0}."""
    lo = m.r0 * (1 - delta)
    lc = m.log_cdf(lo) if lo > 0 else -math.inf
    return float(np.logaddexp(lc, m.log_tail(m.r0 * (1 + delta))))


def klartag_fit(m: RadialMeasure, deltas: Optional[Sequence[float]] = None,
                C1: Optional[float] = None) -> TailFit:
    """Envelope fit ``nu{|r - r0| >= delta r0} <= C1 exp(-c1 n delta^2)``.

    With C1 fixed, c1 is the smallest ratio ``-log(p/C1) / (n delta^2)`` over
    the grid, refined by a bounded scalar minimisation around the grid
    minimiser so that the envelope also holds between grid points.
    """
    if m.n < 2:
        raise PreconditionError("concentration fit needs n >= 2 (mode is interior)")
    if deltas is None:
        deltas = np.linspace(0.01, 1.0, 100)
    d = np.asarray(deltas, dtype=float)
    if np.any((d <= 0) | (d > 1)):
        raise DomainError("deltas must lie in (0, 1]")
    n = m.n
    log_p = lambda delta: log_outside_mass(m, delta)  # noqa: E731
    lp = np.array([log_p(x) for x in d])
    if np.all(lp == -np.inf):
        raise FitError("all outside-ball masses underflow; nothing to fit")
    if C1 is None:
        C1 = max(1.0 + 1e-9, float(np.exp(np.max(lp))))
    log_C1 = math.log(C1)
    ratio = lambda delta, lpd: (log_C1 - lpd) / (n * delta**2)  # noqa: E731
    rat = ratio(d, lp)
    i = int(np.argmin(rat))
    c1 = float(rat[i])
    lo = d[i - 1] if i > 0 else 0.5 * d[i]
    hi = d[i + 1] if i + 1 < len(d) else d[i]
    if hi > lo:
        res = minimize_scalar(lambda x: ratio(x, log_p(x)), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-6 * hi})
        c1 = min(c1, float(res.fun))
    c1 *= 1 - 1e-9
    if not c1 > 0:
        raise FitError(f"non-positive concentration rate {c1}")
    residuals = log_C1 - c1 * n * d**2 - lp
    return TailFit(c1, C1, d, lp, residuals)
