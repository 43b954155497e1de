"""Achievable boundary measures: centred balls and half-spaces, plus a sampler.

Any explicit set of mass ``a`` has boundary measure at least Is(a), so these
perimeters are upper bounds on the isoperimetric profile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import betainc, logsumexp
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, RootFindingError
from .potential import Potential
from .quadrature import DEFAULT_PLAN, QuadraturePlan, log_integrate
from .radial import RadialMeasure, cached_normalize, log_sphere_area
from .radial import _CUT_DEPTH

LOG_HALF = math.log(0.5)


@dataclass(frozen=True)
class WitnessResult:
    a: float
    family: str
    parameter: float
    perimeter: float


def _check_a(a):
    if not 0 < a < 1:
        raise DomainError(f"mass must lie in (0, 1), got {a}")


def ball_witness(m: RadialMeasure, a: float) -> WitnessResult:
    """Centred ball of mass ``a``; its boundary measure is the radial density at its radius."""
    _check_a(a)
    r = m.quantile_log_cdf(math.log(a)) if a <= 0.5 else m.quantile_log_tail(math.log1p(-a))
    return WitnessResult(a, "ball", r, float(m.density(r)))


def complement_ball_witness(m: RadialMeasure, a: float) -> WitnessResult:
    """Exterior of the centred ball of mass ``1 - a`` (same boundary as that ball)."""
    _check_a(a)
    r = m.quantile_log_tail(math.log(a)) if a <= 0.5 else m.quantile_log_cdf(math.log1p(-a))
    return WitnessResult(a, "ball_complement", r, float(m.density(r)))


@lru_cache(maxsize=8192)
def radial_profile(m: RadialMeasure, a: float) -> float:
    """Isoperimetric profile of the radial law itself.

    The radial law is log-concave on the line, where half-lines are extremal,
    so the profile is the smaller density at the a- and (1-a)-quantiles.
    """
    return min(ball_witness(m, a).perimeter, complement_ball_witness(m, a).perimeter)


# half-space marginal -------------------------------------------------------


class Marginal:
    """Law of the first coordinate X_1 under the full measure on R^n (n >= 2)."""

    def __init__(self, m: RadialMeasure):
        if m.n < 2:
            raise DomainError("use the one-dimensional law directly for n = 1")
        self.m = m
        self.n = m.n
        self.p = m.potential
        self.log_const = log_sphere_area(self.n - 1) - log_sphere_area(self.n) - m.log_z_rad
        self._beta_a = 0.5 * (self.n - 1)

    def log_density(self, t: float) -> float:
        """log of the marginal density, a single integral over the orthogonal radius s."""
        t = abs(float(t))
        k = self.n - 2
        phi = self.p.eval

        def logf(s):
            with np.errstate(divide="ignore"):
                base = -phi(np.sqrt(t * t + s * s))
                return base if k == 0 else k * np.log(s) + base

        peak = self._s_peak(t)
        top = float(logf(np.array(peak))) if peak > 0 else -phi(t)
        hi = max(peak, self.m.r0, 1e-3) * 2.0
        while float(logf(np.array(hi))) > top - _CUT_DEPTH:
            hi *= 1.5
        seeds = [0.5 * peak, peak, 2 * peak] if peak > 0 else []
        return self.log_const + log_integrate(logf, 0.0, hi, seeds, self.m.quad)

    def _s_peak(self, t: float) -> float:
        k = self.n - 2
        if k == 0:
            return 0.0

        def slope(s):
            rho = math.hypot(t, s)
            return k / s - self.p.deriv(rho) * s / rho

        hi = max(self.m.r0, 1.0)
        while slope(hi) > 0:
            hi *= 2.0
        lo = 0.5 * hi
        while slope(lo) < 0:
            lo *= 0.5
        return brentq(slope, lo, hi, rtol=1e-12)

    def log_upper_tail(self, t: float) -> float:
        """log P(X_1 > t) for t >= 0 as an integral over the radius.

        P(theta_1 > v) = I_{1-v^2}((n-1)/2, 1/2) / 2 for a uniform direction;
        substituting r = t + w^2 removes the endpoint root singularity.
        """
        if t < 0:
            raise DomainError("upper tail is evaluated for t >= 0; use symmetry")
        if t == 0:
            return LOG_HALF
        m, b = self.m, self._beta_a
        lz = m.log_z_rad
        nm1 = m.n - 1
        phi = self.p.eval

        def logf(w):
            r = t + w * w
            x = np.clip(1.0 - (t / r) ** 2, 0.0, 1.0)
            with np.errstate(divide="ignore"):
                return (math.log(2.0) + np.log(w) + nm1 * np.log(r) - phi(r) - lz
                        + LOG_HALF + np.log(betainc(b, 0.5, x)))

        upper = m._upper(t)
        w_hi = math.sqrt(upper - t)
        seeds = [math.sqrt(max(r - t, 0.0)) for r in (0.5 * m.r0, m.r0, 1.5 * m.r0, 2 * m.r0)]
        return log_integrate(logf, 0.0, w_hi, seeds, m.quad)

    def threshold(self, a: float) -> float:
        """t >= 0 with P(X_1 > t) = a, for a <= 1/2."""
        if a == 0.5:
            return 0.0
        target = math.log(a)
        f = lambda t: self.log_upper_tail(t) - target  # noqa: E731
        hi = max(self.m.r0 / math.sqrt(self.n), self.p.inverse(1.0))
        while f(hi) > 0:
            hi *= 2.0
        lo = 0.0
        return brentq(f, lo, hi, xtol=1e-14 * hi, rtol=1e-14, maxiter=500)


@lru_cache(maxsize=8192)
def halfspace_witness(n: int, p: Potential, a: float,
                      plan: QuadraturePlan = DEFAULT_PLAN) -> WitnessResult:
    """Half-space {x_1 <= t} of mass ``a``; perimeter is the marginal density at t."""
    _check_a(a)
    b = min(a, 1.0 - a)
    m = cached_normalize(n, p, plan)
    if n == 1:
        # symmetric law exp(-phi(|x|)) / (2 Z); upper tail at x is tail_radial(x) / 2
        x = 0.0 if b == 0.5 else m.quantile_log_tail(math.log(2.0 * b))
        log_g = -p.eval(x) - math.log(2.0) - m.log_z_rad
    else:
        marg = Marginal(m)
        x = marg.threshold(b)
        log_g = marg.log_density(x)
    t = -x if a < 0.5 else x
    return WitnessResult(a, "halfspace", t, math.exp(log_g))


def upper_bound(n: int, p: Potential, a: float, plan: QuadraturePlan = DEFAULT_PLAN,
                m: Optional[RadialMeasure] = None) -> float:
    """Smallest perimeter among the ball, ball-complement and half-space of mass a."""
    _check_a(a)
    m = m or cached_normalize(n, p, plan)
    return min(radial_profile(m, a), halfspace_witness(n, p, a, plan).perimeter)


# sampling --------------------------------------------------------------------

_GL_X, _GL_W = leggauss(21)
_TABLE_EDGE = 1e-13


def _inverse_cdf_table(m: RadialMeasure, knots: int = 2048):
    lo = m.quantile_log_cdf(math.log(_TABLE_EDGE))
    hi = m.quantile_log_tail(math.log(_TABLE_EDGE))
    edges = np.linspace(lo, hi, knots + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    logf = m._logf()(x) - m.log_z_rad
    panel = logsumexp(logf + np.log(_GL_W)[None, :], axis=1) + np.log(half)
    cum = m.cdf(lo) + np.concatenate([[0.0], np.cumsum(np.exp(panel))])
    keep = np.concatenate([[True], np.diff(cum) > 0])
    return PchipInterpolator(cum[keep], edges[keep]), cum[keep][0], cum[keep][-1]


def sample(m: RadialMeasure, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` points of the full measure as radius times uniform direction.

    Radii come from a monotone interpolant of the quadrature CDF; uniforms
    outside its range fall back to the exact quantile.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    g = rng.standard_normal((count, m.n))
    theta = g / np.linalg.norm(g, axis=1, keepdims=True)
    inv, u_lo, u_hi = _inverse_cdf_table(m)
    inside = (u >= u_lo) & (u <= u_hi)
    r = np.empty(count)
    r[inside] = inv(u[inside])
    for i in np.flatnonzero(~inside):
        r[i] = m.quantile(u[i]) if 0 < u[i] < 1 else m.quantile(_TABLE_EDGE)
    return r[:, None] * theta
