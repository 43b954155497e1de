"""Convex radial potentials phi and numerical hypothesis checks.

A :class:`Potential` represents ``x -> phi_base(lam * x)`` on ``[0, inf)``.
Power potentials ``(lam*x)**alpha`` are handled analytically; custom ones
take a vectorised callable and fall back to finite differences and
bracketed root finding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnboundedInverseError

_EPS = np.finfo(float).eps
_BRACKET_LIMIT = 1e300
# y slightly below phi(0) = 0 from roundoff clamps to 0
_NEG_CLAMP = 1e-9

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"

H2PRIME_EXPONENTS = tuple(2.0 + 0.5 * k for k in range(13))


@dataclass(frozen=True)
class Potential:
    kind: str
    alpha: Optional[float] = None
    lam: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False)
    dfunc: Optional[Callable] = field(default=None, compare=False)
    d2func: Optional[Callable] = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("power", "custom"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.kind == "power":
            if self.alpha is None or not self.alpha >= 1:
                raise ValueError(f"power potential needs alpha >= 1, got {self.alpha}")
        elif self.func is None:
            raise ValueError("custom potential needs an evaluation callable")

    @classmethod
    def power(cls, alpha: float, lam: float = 1.0) -> "Potential":
        return cls("power", alpha=float(alpha), lam=float(lam), name=f"power({alpha:g})")

    @classmethod
    def custom(cls, func, deriv=None, deriv2=None, lam: float = 1.0, name: str = "custom"):
        """Wrap ``func`` (the base potential, must accept numpy arrays).

        ``deriv`` and ``deriv2`` are derivatives of the base function; when
        omitted, central finite differences are used.
        """
        return cls("custom", lam=float(lam), func=func, dfunc=deriv, d2func=deriv2, name=name)

    def with_lambda(self, lam: float) -> "Potential":
        return replace(self, lam=float(lam))

    def rescaled(self, s: float) -> "Potential":
        """``x -> phi(s*x)``."""
        return replace(self, lam=self.lam * float(s))

    def normalized(self) -> "Potential":
        """Rescale so that phi(1) = 1."""
        return self.rescaled(self.inverse(1.0))

    def __call__(self, x):
        return self.eval(x)

    def __hash__(self):
        return hash((self.kind, self.alpha, self.lam, id(self.func), self.name))

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (self.kind, self.alpha, self.lam, self.name) == (
            other.kind, other.alpha, other.lam, other.name
        ) and self.func is other.func

    # evaluation ---------------------------------------------------------
    def eval(self, x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0):
            raise DomainError(f"potential evaluated at negative x: {x}")
        y = self.lam * xa
        if self.kind == "power":
            with np.errstate(over="ignore"):
                out = np.power(y, self.alpha)
        else:
            out = np.asarray(self._base(y), dtype=float)
        return float(out) if out.ndim == 0 else out

    def _base(self, y):
        try:
            return self.func(y)
        except (TypeError, ValueError):
            return np.vectorize(self.func, otypes=[float])(y)

    def deriv(self, x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0):
            raise DomainError(f"derivative requires x > 0, got {x}")
        if self.kind == "power":
            out = self.alpha * self.lam * np.power(self.lam * xa, self.alpha - 1.0)
        elif self.dfunc is not None:
            out = self.lam * np.asarray(self.dfunc(self.lam * xa), dtype=float)
        else:
            out = np.vectorize(self._fd1, otypes=[float])(xa)
        return float(out) if np.ndim(out) == 0 else out

    def deriv2(self, x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0):
            raise DomainError(f"second derivative requires x > 0, got {x}")
        if self.kind == "power":
            a = self.alpha
            out = a * (a - 1.0) * self.lam**2 * np.power(self.lam * xa, a - 2.0)
        elif self.d2func is not None:
            out = self.lam**2 * np.asarray(self.d2func(self.lam * xa), dtype=float)
        else:
            out = np.vectorize(self._fd2, otypes=[float])(xa)
        return float(out) if np.ndim(out) == 0 else out

    def _fd1(self, x):
        h = max(1.0, abs(x)) * _EPS ** (1 / 3)
        if x - h >= 0:
            return (self.eval(x + h) - self.eval(x - h)) / (2 * h)
        # one-sided second-order stencil near the origin
        return (-3 * self.eval(x) + 4 * self.eval(x + h) - self.eval(x + 2 * h)) / (2 * h)

    def _fd2(self, x):
        h = max(1.0, abs(x)) * _EPS ** (1 / 4)
        if x - h >= 0:
            return (self.eval(x + h) - 2 * self.eval(x) + self.eval(x - h)) / h**2
        return (self.eval(x) - 2 * self.eval(x + h) + self.eval(x + 2 * h)) / h**2

    # inverse ------------------------------------------------------------
    def inverse(self, y):
        ya = np.asarray(y, dtype=float)
        if np.any(ya < -_NEG_CLAMP):
            raise DomainError(f"inverse of negative value {y}")
        ya = np.maximum(ya, 0.0)
        if self.kind == "power":
            out = np.power(ya, 1.0 / self.alpha) / self.lam
            return float(out) if out.ndim == 0 else out
        if ya.ndim == 0:
            return self._inverse_scalar(float(ya))
        return np.array([self._inverse_scalar(v) for v in ya.ravel()]).reshape(ya.shape)

    def _inverse_scalar(self, y: float) -> float:
        if y == 0.0:
            return 0.0
        hi = 1.0
        while self.eval(hi) < y:
            hi *= 2.0
            if hi > _BRACKET_LIMIT:
                raise UnboundedInverseError(f"phi never reaches {y} below {_BRACKET_LIMIT:g}")
        while hi > 1e-300 and self.eval(0.5 * hi) >= y:
            hi *= 0.5
        lo = 0.5 * hi
        if self.eval(hi) == y:
            return hi
        return brentq(lambda x: self.eval(x) - y, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=500)


# hypothesis checks ---------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str
    witness_x: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def __str__(self):
        if self.status == FAILS:
            return f"fails(x={self.witness_x:.6g})"
        return self.status


@dataclass(frozen=True)
class HypothesisReport:
    h0: Verdict
    h1: Verdict
    h1_prime: Verdict
    h2: Verdict
    h2_prime: Verdict
    grid: np.ndarray = field(repr=False, compare=False)
    alpha_h2prime: Optional[float] = None
    tol: float = 1e-9

    def classes(self) -> tuple[str, ...]:
        names = ("h0", "h1", "h1_prime", "h2", "h2_prime")
        return tuple(n for n in names if getattr(self, n).holds)


def _first_violation(values, tol, increasing):
    """Index of the first grid step breaking monotonicity (relative tol)."""
    v = np.asarray(values)
    scale = np.maximum(np.maximum(np.abs(v[:-1]), np.abs(v[1:])), 1e-300)
    step = (v[1:] - v[:-1]) / scale
    bad = step < -tol if increasing else step > tol
    idx = np.flatnonzero(bad)
    return None if idx.size == 0 else int(idx[0]) + 1


def check_hypotheses(p: Potential, grid_size: int = 64, x_max: float = 10.0,
                     tol: float = 1e-9, x_min_ratio: float = 1e-6) -> HypothesisReport:
    """Grid-based semi-decision of the hypothesis classes H0, H1, H1', H2, H2'."""
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    x = np.geomspace(x_max * x_min_ratio, x_max, grid_size)
    xz = np.concatenate([[0.0], x])
    phi = np.asarray(p.eval(xz), dtype=float)

    if not np.all(np.isfinite(phi)) or np.all(phi[1:] == 0):
        u = Verdict(UNDETERMINED)
        return HypothesisReport(u, u, u, u, u, grid=x, tol=tol)

    h0 = Verdict(HOLDS)
    if abs(phi[0]) > 1e-12:
        h0 = Verdict(FAILS, 0.0)
    else:
        i = _first_violation(phi, tol, increasing=True)
        if i is not None:
            h0 = Verdict(FAILS, float(xz[i]))
        else:
            slopes = np.diff(phi) / np.diff(xz)
            i = _first_violation(slopes, tol, increasing=True)
            if i is not None:
                h0 = Verdict(FAILS, float(xz[i]))
    if not h0.holds:
        return HypothesisReport(h0, h0, h0, h0, h0, grid=x, tol=tol)

    root = np.sqrt(np.maximum(phi, 0.0))
    ratio = root[1:] / x
    i = _first_violation(ratio, tol, increasing=False)
    h1 = Verdict(HOLDS) if i is None else Verdict(FAILS, float(x[i]))
    i = _first_violation(ratio, tol, increasing=True)
    h2 = Verdict(HOLDS) if i is None else Verdict(FAILS, float(x[i]))

    root_slopes = np.diff(root) / np.diff(xz)
    i = _first_violation(root_slopes, tol, increasing=False)
    h1p = Verdict(HOLDS) if i is None else Verdict(FAILS, float(xz[i]))

    alpha_h2p = None
    if not h2.holds:
        h2p = h2
    else:
        h2p = None
        for beta in H2PRIME_EXPONENTS:
            i = _first_violation(phi[1:] / x**beta, tol, increasing=False)
            if i is None:
                h2p, alpha_h2p = Verdict(HOLDS), beta
                break
        if h2p is None:
            h2p = Verdict(FAILS, float(x[i]))
    return HypothesisReport(h0, h1, h1p, h2, h2p, grid=x, alpha_h2prime=alpha_h2p, tol=tol)


# growth inequalities --------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    lesser: float
    greater: float
    hypothesis: str

    @property
    def slack(self) -> float:
        return (self.greater - self.lesser) / max(1.0, abs(self.greater), abs(self.lesser))

    def passed(self, tol: float = 1e-9) -> bool:
        return self.slack >= -tol


def lemma21_check(p: Potential, t: float, x: float,
                  report: Optional[HypothesisReport] = None) -> dict[str, InequalityCheck]:
    """Evaluate the growth inequalities valid for the detected classes of ``p``.

    Returns a mapping from a readable inequality label to its two sides;
    ``check.passed()`` compares the relative slack against ``-1e-9``.
    """
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if report is None:
        report = check_hypotheses(p, x_max=max(4.0, 4 * t * x))
    phi_x, phi_tx = p.eval(x), p.eval(t * x)
    y = phi_x
    inv_y, inv_ty = p.inverse(y), p.inverse(t * y)
    dx = p.deriv(x)
    out: dict[str, InequalityCheck] = {}
    if report.h0.holds:
        out["H0 phi(tx) >= t phi(x)"] = InequalityCheck(t * phi_x, phi_tx, "h0")
        out["H0 inv(ty) <= t inv(y)"] = InequalityCheck(inv_ty, t * inv_y, "h0")
        out["H0 x phi'(x) >= phi(x)"] = InequalityCheck(phi_x, x * dx, "h0")
    if report.h1.holds:
        out["H1 phi(tx) <= t^2 phi(x)"] = InequalityCheck(phi_tx, t * t * phi_x, "h1")
        out["H1 sqrt(t) inv(y) <= inv(ty)"] = InequalityCheck(math.sqrt(t) * inv_y, inv_ty, "h1")
        out["H1 x phi'(x) <= 2 phi(x)"] = InequalityCheck(x * dx, 2 * phi_x, "h1")
        out["H1 phi'(tx) <= 2t phi'(x)"] = InequalityCheck(p.deriv(t * x), 2 * t * dx, "h1")
    if report.h2.holds:
        out["H2 phi(tx) >= t^2 phi(x)"] = InequalityCheck(t * t * phi_x, phi_tx, "h2")
        out["H2 inv(ty) <= sqrt(t) inv(y)"] = InequalityCheck(inv_ty, math.sqrt(t) * inv_y, "h2")
        out["H2 x phi'(x) >= 2 phi(x)"] = InequalityCheck(2 * phi_x, x * dx, "h2")
    return out
