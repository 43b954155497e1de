"""Globally adaptive Gauss-Legendre quadrature carried out in log space.

Integrands are passed as their logarithm. Each panel is exponentiated only
after subtracting its own peak log-value, so integrands like
``r**(n-1) * exp(-phi(r))`` can be handled for n in the thousands.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError

_X_LO, _W_LO = leggauss(10)
_X_HI, _W_HI = leggauss(21)
_NODES = np.concatenate([_X_LO, _X_HI])
_N_LO = len(_X_LO)


@dataclass(frozen=True)
class QuadraturePlan:
    rel_tol: float = 1e-10
    abs_tol_log: float = -60.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_PLAN = QuadraturePlan()


def _panel(logf, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(logf(mid + half * _NODES), dtype=float)
    peak = np.max(vals)
    if not np.isfinite(peak):
        if peak == -np.inf:
            return -np.inf, -np.inf
        raise QuadratureError(f"non-finite log-integrand on [{a}, {b}]")
    e = np.exp(vals - peak)
    s_lo = float(np.dot(_W_LO, e[:_N_LO]))
    s_hi = float(np.dot(_W_HI, e[_N_LO:]))
    log_half = math.log(half)
    log_val = peak + log_half + math.log(s_hi) if s_hi > 0 else -np.inf
    diff = abs(s_hi - s_lo)
    log_err = peak + log_half + math.log(diff) if diff > 0 else -np.inf
    return log_val, log_err


def log_integrate(
    logf: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    plan: QuadraturePlan = DEFAULT_PLAN,
    log_ref: float | None = None,
) -> float:
    """Return ``log(integral_a^b exp(logf(x)) dx)``.

    ``logf`` must accept a numpy array. Panels are first split at the given
    breakpoints, then the panel with the largest error estimate (21-point
    minus 10-point rule) is halved until the summed error falls below
    ``rel_tol`` times the integral. When ``log_ref`` is given, an absolute
    error of ``exp(abs_tol_log + log_ref)`` is also accepted.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise QuadratureError("integration limits must be finite")
    if b <= a:
        if b == a:
            return -math.inf
        raise QuadratureError(f"empty interval [{a}, {b}]")
    cuts = sorted({float(p) for p in breakpoints if a < p < b})
    edges = [a, *cuts, b]
    heap = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _panel(logf, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, v))
    log_rel = math.log(plan.rel_tol)
    splits = 0
    while True:
        vals = np.array([p[3] for p in heap])
        errs = np.array([-p[0] for p in heap])
        total = float(np.logaddexp.reduce(vals))
        err = float(np.logaddexp.reduce(errs))
        target = log_rel + total
        if log_ref is not None:
            target = max(target, plan.abs_tol_log + log_ref)
        if err <= target or total == -math.inf:
            return total
        if splits >= plan.max_subdivisions:
            achieved = math.exp(err - total) if math.isfinite(total) else math.inf
            raise QuadratureError(
                f"no convergence on [{a}, {b}] after {splits} subdivisions "
                f"(achieved relative tolerance {achieved:.3g})",
                achieved_tol=achieved,
            )
        _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            achieved = math.exp(err - total)
            raise QuadratureError(
                f"panel collapsed at {lo} (achieved relative tolerance {achieved:.3g})",
                achieved_tol=achieved,
            )
        for x0, x1 in ((lo, mid), (mid, hi)):
            v, e = _panel(logf, x0, x1)
            heapq.heappush(heap, (-e, x0, x1, v))
        splits += 1
