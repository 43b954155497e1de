"""One-dimensional isoperimetric profiles and comparison functions on [0, 1].

All profiles are symmetric about 1/2 and vanish at 0 and 1; internally every
argument is folded to ``min(a, 1 - a)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtri

from .errors import DomainError
from .potential import Potential, check_hypotheses
from .radial import cached_normalize

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)
D_GRID = tuple(2.0 ** -k for k in range(1, 41))

KINDS = ("I_phi", "L_phi", "L_alpha", "gaussian", "cheeger")


def _fold(a: float) -> float:
    if not 0 <= a <= 1:
        raise DomainError(f"profile argument must lie in [0, 1], got {a}")
    return min(a, 1.0 - a)


def log_z_phi(p: Potential) -> float:
    """log of ``2 * int_0^inf exp(-phi)``, the normaliser of the symmetric 1-D law."""
    return math.log(2.0) + cached_normalize(1, p).log_z_rad


def l_phi(p: Potential, a: float) -> float:
    """``a log(1/a) / phi^-1(log 1/a)`` at ``a = min(a, 1-a)``."""
    b = _fold(a)
    if b == 0:
        return 0.0
    la = -math.log(b)
    return b * la / p.inverse(la)


def l_alpha(alpha: float, a: float) -> float:
    b = _fold(a)
    if b == 0:
        return 0.0
    return b * (-math.log(b)) ** (1.0 - 1.0 / alpha)


def cheeger_linear(a: float) -> float:
    return _fold(a)


def gaussian_profile(a: float) -> float:
    """Standard normal density at the standard normal quantile of ``a``."""
    b = _fold(a)
    if b == 0:
        return 0.0
    z = ndtri(b)
    return math.exp(-0.5 * z * z - _LOG_SQRT_2PI)


@lru_cache(maxsize=65536)
def _i_phi(p: Potential, b: float) -> float:
    m1 = cached_normalize(1, p)
    log_z = math.log(2.0) + m1.log_z_rad
    if b == 0.5:
        return math.exp(-log_z)
    # G(x) = tail_1(x) / 2 on x >= 0, so G(x) = b  <=>  tail_1(x) = 2b
    x = m1.quantile_log_tail(math.log(2.0 * b))
    return math.exp(-p.eval(x) - log_z)


def i_phi(p: Potential, a: float) -> float:
    """Exact profile of the symmetric law with density ``exp(-phi(|x|)) / Z``.

    Half-lines are extremal, so the value is the density at the point whose
    upper tail has mass ``min(a, 1-a)``; the tail side is used so that
    ``a`` down to 1e-12 keeps full relative accuracy.
    """
    b = _fold(a)
    if b == 0:
        return 0.0
    return _i_phi(p, float(b))


@dataclass(frozen=True)
class ProfileFn:
    """Evaluatable profile J: [0, 1] -> [0, inf)."""

    kind: str
    potential: Optional[Potential] = None
    alpha: Optional[float] = None
    log_normalization: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("I_phi", "L_phi") and self.potential is None:
            raise ValueError(f"{self.kind} needs a potential")
        if self.kind == "L_alpha" and self.alpha is None:
            raise ValueError("L_alpha needs alpha")
        if self.kind == "I_phi" and self.log_normalization is None:
            object.__setattr__(self, "log_normalization", log_z_phi(self.potential))

    @classmethod
    def i_phi(cls, p: Potential) -> "ProfileFn":
        return cls("I_phi", potential=p)

    @classmethod
    def gaussian(cls) -> "ProfileFn":
        return cls("gaussian")

    def value(self, a: float) -> float:
        if self.kind == "I_phi":
            return i_phi(self.potential, a)
        if self.kind == "L_phi":
            return l_phi(self.potential, a)
        if self.kind == "L_alpha":
            return l_alpha(self.alpha, a)
        if self.kind == "gaussian":
            return gaussian_profile(a)
        return cheeger_linear(a)

    def __call__(self, a):
        if np.ndim(a) == 0:
            return self.value(float(a))
        return np.array([self.value(float(x)) for x in np.ravel(a)]).reshape(np.shape(a))

    @property
    def label(self) -> str:
        if self.potential is not None:
            return f"{self.kind}[{self.potential.name}, lam={self.potential.lam:.6g}]"
        if self.alpha is not None:
            return f"{self.kind}[alpha={self.alpha:g}]"
        return self.kind


@dataclass(frozen=True)
class D12Estimate:
    d1_hat: float
    d2_hat: float
    conforming: bool
    grid: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)


def estimate_d1_d2(p: Potential, a_grid: Optional[Sequence[float]] = None) -> D12Estimate:
    """Extremes over ``a_grid`` of ``L_phi(a) / I_phi(a)`` after rescaling to phi(1) = 1.

    Both profiles scale linearly under ``phi -> phi(lam .)``, so the ratio is
    scale free; the rescaling only fixes the regime split at r = 1.
    """
    q = p.normalized()
    grid = np.asarray(D_GRID if a_grid is None else a_grid, dtype=float)
    report = check_hypotheses(q, x_max=10.0)
    ratios = np.array([l_phi(q, a) / i_phi(q, a) for a in grid])
    return D12Estimate(float(ratios.min()), float(ratios.max()), report.h1_prime.holds, grid, ratios)


def a_grid_spec(spec: str, spacing: str = "linear") -> np.ndarray:
    """Parse ``lo:hi:steps`` into a grid of probabilities."""
    try:
        lo_s, hi_s, steps_s = spec.split(":")
        lo, hi, steps = float(lo_s), float(hi_s), int(steps_s)
    except ValueError as exc:
        raise DomainError(f"grid spec must look like lo:hi:steps, got {spec!r}") from exc
    if steps < 1 or not (0 <= lo <= hi <= 1):
        raise DomainError(f"invalid grid spec {spec!r}")
    if spacing == "log":
        if lo <= 0:
            raise DomainError("log-spaced grid needs lo > 0")
        return np.geomspace(lo, hi, steps)
    return np.linspace(lo, hi, steps)
