"""Experiment configuration: a sectioned key = value file with JSON-literal values.

Example::

    [potential]
    kind = power
    alpha = [1, 1.5, 2, 3]
    lambda = 1.0            # or "isotropic"

    [sweep]
    n_list = [2, 5, 10]
    a_grid = "1e-6:0.5:12"
    a_spacing = log

Bare words that are not valid JSON are read as strings. Unknown sections and
keys are rejected with the offending line number.
"""
from __future__ import annotations

import configparser
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ConfigError
from .ledger import ConstantsLedger
from .profile import a_grid_spec
from .quadrature import DEFAULT_PLAN, QuadraturePlan

SWEEP_ROUTES = ("auto", "bobkov", "big", "small", "tensor")

_SCHEMA = {
    "potential": ("kind", "alpha", "lambda"),
    "sweep": ("n_list", "a_grid", "a_spacing", "routes", "seed", "mc_count"),
    "quad": ("rel_tol", "abs_tol_log", "max_subdivisions"),
    "ledger": ("kappa", "sphere_coeff", "c1", "C1", "split_c"),
    "output": ("dir",),
}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "power"
    alphas: tuple = (1.0, 1.5, 2.0, 3.0)
    lam: Union[float, str] = 1.0
    n_list: tuple = (2, 5, 10, 50, 200)
    a_grid: str = "1e-6:0.5:12"
    a_spacing: str = "log"
    routes: tuple = SWEEP_ROUTES
    seed: int = 0
    mc_count: int = 2000
    quad: QuadraturePlan = DEFAULT_PLAN
    ledger: ConstantsLedger = field(default_factory=ConstantsLedger)
    out_dir: str = "out"

    def __post_init__(self):
        if self.kind != "power":
            raise ConfigError(f"potential.kind: only 'power' can be configured from a file, got {self.kind!r}")
        if not self.alphas or any(not a > 0 for a in self.alphas):
            raise ConfigError("potential.alpha: need at least one positive exponent")
        if isinstance(self.lam, str):
            if self.lam != "isotropic":
                raise ConfigError(f"potential.lambda: expected a number or 'isotropic', got {self.lam!r}")
        elif not self.lam > 0:
            raise ConfigError("potential.lambda must be positive")
        if not self.n_list:
            raise ConfigError("sweep.n_list is empty")
        if any(int(n) != n or n < 1 for n in self.n_list):
            raise ConfigError("sweep.n_list: dimensions must be positive integers")
        if self.a_spacing not in ("linear", "log"):
            raise ConfigError(f"sweep.a_spacing: expected linear or log, got {self.a_spacing!r}")
        bad = [r for r in self.routes if r not in SWEEP_ROUTES]
        if bad or not self.routes:
            raise ConfigError(f"sweep.routes: unknown {bad}; expected a subset of {list(SWEEP_ROUTES)}")
        if self.mc_count < 0:
            raise ConfigError("sweep.mc_count must be >= 0")
        try:
            grid = self.masses()
        except ValueError as exc:
            raise ConfigError(f"sweep.a_grid: {exc}") from exc
        if np.any(grid <= 0) or np.any(grid >= 1):
            raise ConfigError("sweep.a_grid: masses must lie strictly inside (0, 1)")

    def masses(self) -> np.ndarray:
        return a_grid_spec(self.a_grid, self.a_spacing)

    def to_ini(self) -> str:
        """Fully resolved configuration, deterministic and re-parseable."""
        d = lambda v: json.dumps(v)  # noqa: E731
        led = self.ledger
        lines = [
            "[potential]",
            f"kind = {self.kind}",
            f"alpha = {d(list(self.alphas))}",
            f"lambda = {d(self.lam)}",
            "",
            "[sweep]",
            f"n_list = {d(list(self.n_list))}",
            f"a_grid = {d(self.a_grid)}",
            f"a_spacing = {self.a_spacing}",
            f"routes = {d(list(self.routes))}",
            f"seed = {self.seed}",
            f"mc_count = {self.mc_count}",
            "",
            "[quad]",
            f"rel_tol = {d(self.quad.rel_tol)}",
            f"abs_tol_log = {d(self.quad.abs_tol_log)}",
            f"max_subdivisions = {self.quad.max_subdivisions}",
            "",
            "[ledger]",
            f"kappa = {d(led.kappa)}",
            f"sphere_coeff = {d(led.sphere_coeff)}",
        ]
        for name in ("c1", "C1", "split_c"):
            v = getattr(led, name)
            if v is not None:
                lines.append(f"{name} = {d(v)}")
        lines += ["", "[output]", f"dir = {d(self.out_dir)}", ""]
        return "\n".join(lines)


def _value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _line_index(text: str) -> dict:
    """(section, key) -> line number, for diagnostics."""
    where, section = {}, None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            where.setdefault((section, None), i)
        elif section and s and not s.startswith(("#", ";")) and "=" in s:
            where.setdefault((section, s.split("=", 1)[0].strip()), i)
    return where


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    lines = _line_index(text)

    def loc(section, key=None):
        return f"{source}:{lines.get((section, key), '?')}"

    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{loc(section)}: unknown section [{section}]; expected one of {sorted(_SCHEMA)}")
        for key in cp[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{loc(section, key)}: unknown key {key!r} in [{section}]; "
                                  f"expected one of {list(_SCHEMA[section])}")

    kw, quad_kw, ledger_kw = {}, {}, {}
    get = lambda s, k: _value(cp[s][k])  # noqa: E731
    try:
        if cp.has_section("potential"):
            sec = cp["potential"]
            if "kind" in sec:
                kw["kind"] = str(get("potential", "kind"))
            if "alpha" in sec:
                a = get("potential", "alpha")
                kw["alphas"] = tuple(float(x) for x in (a if isinstance(a, list) else [a]))
            if "lambda" in sec:
                v = get("potential", "lambda")
                kw["lam"] = v if isinstance(v, str) else float(v)
        if cp.has_section("sweep"):
            sec = cp["sweep"]
            if "n_list" in sec:
                v = get("sweep", "n_list")
                kw["n_list"] = tuple(int(x) for x in (v if isinstance(v, list) else [v]))
            if "a_grid" in sec:
                kw["a_grid"] = str(get("sweep", "a_grid"))
            if "a_spacing" in sec:
                kw["a_spacing"] = str(get("sweep", "a_spacing"))
            if "routes" in sec:
                v = get("sweep", "routes")
                kw["routes"] = tuple(str(x) for x in (v if isinstance(v, list) else [v]))
            for k in ("seed", "mc_count"):
                if k in sec:
                    kw[k] = int(get("sweep", k))
        if cp.has_section("quad"):
            for k in cp["quad"]:
                v = get("quad", k)
                quad_kw[k] = int(v) if k == "max_subdivisions" else float(v)
        if cp.has_section("ledger"):
            for k in cp["ledger"]:
                ledger_kw[k] = float(get("ledger", k))
        if cp.has_section("output") and "dir" in cp["output"]:
            kw["out_dir"] = str(get("output", "dir"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: bad value: {exc}") from exc
    if quad_kw:
        kw["quad"] = replace(DEFAULT_PLAN, **quad_kw)
    if ledger_kw:
        try:
            kw["ledger"] = ConstantsLedger(**ledger_kw)
        except ValueError as exc:
            raise ConfigError(f"{loc('ledger')}: {exc}") from exc
    return ExperimentConfig(**kw)


def load_config(path: Optional[str]) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(p))

