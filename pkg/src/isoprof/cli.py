"""Command-line entry point: ``isoprof <subcommand>``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
3 numerical failure.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import bounds as B
from .config import ExperimentConfig, load_config
from .errors import ConfigError, DomainError, NumericError, PreconditionError
from .potential import Potential
from .profile import KINDS, ProfileFn, a_grid_spec
from .radial import cached_normalize, isotropic_lambda
from .sweep import (
    FAIL,
    certificate_lines,
    fmt,
    report_csv,
    report_markdown,
    run_sweep,
    verify_paper,
    write_sweep,
)
from .witness import ball_witness, complement_ball_witness, halfspace_witness, sample

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class Ctx:
    def __init__(self, config_path, out, quiet):
        self.config_path = config_path
        self.out = out
        self.quiet = quiet
        self._cfg = None

    @property
    def cfg(self) -> ExperimentConfig:
        if self._cfg is None:
            self._cfg = load_config(self.config_path)
        return self._cfg

    def out_dir(self) -> Path:
        return Path(self.out or self.cfg.out_dir)

    def say(self, text: str):
        if not self.quiet:
            click.echo(text, err=True)


def _potential(ctx: Ctx, n: int, alpha: float, lam: str) -> Potential:
    if lam == "isotropic":
        return Potential.power(alpha, isotropic_lambda(n, Potential.power(alpha), ctx.cfg.quad))
    try:
        value = float(lam)
    except ValueError:
        raise click.BadParameter("expected a number or 'isotropic'", param_hint="--lambda")
    return Potential.power(alpha, value)


lambda_option = click.option("--lambda", "lam", default="1", show_default=True,
                             help="Scale of the potential, or 'isotropic'.")


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Experiment config file.")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--quiet", is_flag=True, help="Suppress progress messages.")
@click.pass_context
def cli(click_ctx, config_path, out, quiet):
    """Isoperimetric profiles of radial log-concave measures exp(-phi(|x|))."""
    click_ctx.obj = Ctx(config_path, out, quiet)


@cli.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--alpha", type=float, required=True)
@lambda_option
@click.option("--r", "radii", type=float, multiple=True, help="Radii for cdf/tail/density.")
@click.option("--u", "probs", type=float, multiple=True, help="Probabilities to invert.")
@click.pass_obj
def radial(ctx, n, alpha, lam, radii, probs):
    """Summary of the radial law: normaliser, mode, moments, cdf and quantiles."""
    p = _potential(ctx, n, alpha, lam)
    m = cached_normalize(n, p, ctx.cfg.quad)
    out = {"n": n, "potential": p.name, "lambda": p.lam, "log_z_rad": m.log_z_rad,
           "mode": m.r0, "mean": m.moment(1), "second_moment": m.moment(2)}
    out["points"] = [{"r": r, "cdf": m.cdf(r), "tail": m.tail(r),
                      "density": float(m.density(r)) if r > 0 else 0.0} for r in radii]
    out["quantiles"] = [{"u": u, "r": m.quantile(u)} for u in probs]
    click.echo(json.dumps(out))


@cli.command()
@click.option("--alpha", type=float, required=True)
@lambda_option
@click.option("--kind", type=click.Choice(KINDS), default="I_phi", show_default=True)
@click.option("--a", "masses", type=float, multiple=True)
@click.option("--grid", help="lo:hi:steps grid of masses.")
@click.option("--spacing", type=click.Choice(["linear", "log"]), default="linear", show_default=True)
@click.pass_obj
def profile(ctx, alpha, lam, kind, masses, grid, spacing):
    """One-dimensional profile values as CSV ``a,value``."""
    p = _potential(ctx, 1, alpha, lam)
    if kind in ("I_phi", "L_phi"):
        J = ProfileFn(kind, potential=p)
    elif kind == "L_alpha":
        J = ProfileFn(kind, alpha=alpha)
    else:
        J = ProfileFn(kind)
    pts = list(masses) + (list(a_grid_spec(grid, spacing)) if grid else [])
    if not pts:
        raise click.UsageError("give --a or --grid")
    click.echo("a,value")
    for a in pts:
        click.echo(f"{fmt(float(a))},{fmt(J(float(a)))}")


@cli.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--alpha", type=float, required=True)
@lambda_option
@click.option("--a", "masses", type=float, multiple=True, required=True)
@click.option("--route", type=click.Choice(["auto", "bobkov", "big", "small", "tensor"]),
              default="auto", show_default=True)
@click.pass_obj
def bound(ctx, n, alpha, lam, masses, route):
    """Lower-bound certificates as JSON lines."""
    p = _potential(ctx, n, alpha, lam)
    certs = [B.certify(route, n, p, a, ctx.cfg.ledger, ctx.cfg.quad) for a in masses]
    click.echo(certificate_lines(certs), nl=False)


@cli.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--alpha", type=float, required=True)
@lambda_option
@click.option("--a", type=float, required=True)
@click.pass_obj
def witness(ctx, n, alpha, lam, a):
    """Perimeters of the explicit sets of mass a as CSV ``family,parameter,perimeter``."""
    p = _potential(ctx, n, alpha, lam)
    m = cached_normalize(n, p, ctx.cfg.quad)
    click.echo("family,parameter,perimeter")
    for w in (ball_witness(m, a), complement_ball_witness(m, a), halfspace_witness(n, p, a, ctx.cfg.quad)):
        click.echo(f"{w.family},{fmt(w.parameter)},{fmt(w.perimeter)}")


@cli.command(name="sample")
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--alpha", type=float, required=True)
@lambda_option
@click.option("--count", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False), help="File for the points (default stdout).")
@click.pass_obj
def sample_cmd(ctx, n, alpha, lam, count, seed, out_file):
    """Draw points of the measure; one whitespace-separated row per point."""
    p = _potential(ctx, n, alpha, lam)
    pts = sample(cached_normalize(n, p, ctx.cfg.quad), count, seed)
    if out_file:
        np.savetxt(out_file, pts, fmt="%.17g")
    else:
        np.savetxt(sys.stdout, pts, fmt="%.17g")


@cli.command()
@click.pass_obj
def sweep(ctx):
    """Run the configured grid; writes bounds.csv, checks.csv, constants.json, config.ini."""
    cfg = ctx.cfg
    result = run_sweep(cfg, progress=ctx.say)
    files = write_sweep(result, cfg, ctx.out_dir())
    fails = result.failures
    ctx.say(f"{len(result.bounds)} bounds, {len(result.checks)} checks, {len(fails)} failed")
    for name, path in files.items():
        ctx.say(f"wrote {path}")
    for f in fails[:20]:
        ctx.say(f"FAIL {f['check']} alpha={f['alpha']} n={f['n']} a={f['a']} route={f['route']}")
    sys.exit(EXIT_CHECK if fails else EXIT_OK)


@cli.command(name="verify-paper")
@click.pass_obj
def verify_paper_cmd(ctx):
    """Check each supporting statement on the configured potentials; writes report.csv/report.md."""
    cfg = ctx.cfg
    rows = verify_paper(cfg)
    out = ctx.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(report_csv(rows))
    md = report_markdown(rows)
    (out / "report.md").write_text(md)
    if not ctx.quiet:
        click.echo(md, nl=False)
    sys.exit(EXIT_CHECK if any(r.status == FAIL for r in rows) else EXIT_OK)


def main(argv=None):
    try:
        rv = cli.main(args=argv, prog_name="isoprof", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except (ConfigError, DomainError, PreconditionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except NumericError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
