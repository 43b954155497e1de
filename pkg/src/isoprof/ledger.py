"""Named constants used by the lower-bound constructions, with provenance.

Provenance is one of ``assumed`` (a knob), ``estimated`` (fitted from the
measure at hand) or ``derived`` (computed from other entries; never set by
hand).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

from .radial import RadialMeasure, TailFit, klartag_fit

ASSUMED = "assumed"
ESTIMATED = "estimated"
DERIVED = "derived"


@dataclass(frozen=True)
class ConstantsLedger:
    kappa: float = 0.5
    sphere_coeff: float = 1.0
    c1: Optional[float] = None
    C1: Optional[float] = None
    split_c: Optional[float] = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and not v > 0:
                raise ValueError(f"ledger entry {f.name} must be positive, got {v}")
        if (self.c1 is None) != (self.C1 is None):
            raise ValueError("c1 and C1 must be overridden together")

    @property
    def kappa1(self) -> float:
        k2 = self.kappa**2
        return 2.0 * (k2 + 1.0) / k2

    @property
    def kappa2(self) -> float:
        return self.kappa**2 / (2.0 * math.sqrt(2.0))

    def with_overrides(self, **kw) -> "ConstantsLedger":
        return replace(self, **kw)

    def entries(self) -> list[tuple[str, Optional[float], str]]:
        out = [
            ("kappa", self.kappa, ASSUMED),
            ("kappa1", self.kappa1, DERIVED),
            ("kappa2", self.kappa2, DERIVED),
            ("sphere_coeff", self.sphere_coeff, ASSUMED),
        ]
        if self.c1 is not None:
            out += [("c1", self.c1, ASSUMED), ("C1", self.C1, ASSUMED)]
        if self.split_c is not None:
            out.append(("split_c", self.split_c, ASSUMED))
        return out

    def to_dict(self) -> dict:
        return {
            "inputs": asdict(self),
            "entries": [{"name": n, "value": v, "provenance": p} for n, v, p in self.entries()],
        }


_FIT_CACHE: dict = {}


def concentration(ledger: ConstantsLedger, m: RadialMeasure) -> tuple[float, float, str]:
    """(c1, C1, provenance) for the concentration envelope around the mode."""
    if ledger.c1 is not None:
        return ledger.c1, ledger.C1, ASSUMED
    fit = fit_for(m)
    return fit.c1_hat, fit.C1_hat, ESTIMATED


def fit_for(m: RadialMeasure) -> TailFit:
    # the fit is scale free, so the key drops lambda
    key = (m.n, m.potential.kind, m.potential.alpha, m.potential.func, m.quad)
    fit = _FIT_CACHE.get(key)
    if fit is None:
        fit = klartag_fit(m)
        _FIT_CACHE[key] = fit
    return fit
