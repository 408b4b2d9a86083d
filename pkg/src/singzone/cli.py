"""Command-line front end: ``singmap``, ``simulate``, ``verify`` and ``delta``.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
3 verification failure, 4 singular decoupling matrix at the inspected point.
Every option can also be set through ``SINGZONE_<COMMAND>_<OPTION>``.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .control import decoupling_system
from .decoupling import Mode, is_singular
from .errors import ConfigError, DomainError, EmptyContour
from .model import QuadParams, State14
from .sim import Scenario, run_scenario, scenario_path
from .singularity import (ContourSet, ScanKind, default_ranges, discrepancy_report, scan_grid,
                          zero_contour)
from .verify import SUITES, run_suites

EXIT_IO, EXIT_USAGE, EXIT_VERIFY, EXIT_SINGULAR = 1, 2, 3, 4


def _fail(code: int, msg: str):
    click.echo(f"error: {msg}", err=True)
    raise click.exceptions.Exit(code)


def _load_params(path) -> QuadParams:
    if path is None:
        return QuadParams()
    try:
        with open(path) as fh:
            return QuadParams(**json.load(fh))
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read params file: {exc}")
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        _fail(EXIT_USAGE, f"invalid params file: {exc}")


def _out_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot create output directory {out}: {exc}")
    return out


params_option = click.option("--params", "params_file", type=click.Path(dir_okay=False),
                             help="JSON file with m, d, ix, iy, iz, g (defaults otherwise).")
out_option = click.option("--out-dir", default="./out", show_default=True, type=click.Path(file_okay=False),
                          help="Directory for output files.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Singular-zone analysis and switched feedback-linearization control of a quadrotor."""


@cli.command()
@click.option("--range", "half_width", type=float, default=1.5, show_default=True,
              help="Grid spans [-range, range] on both theta and phi (rad).")
@click.option("--res", type=click.IntRange(min=2), default=301, show_default=True,
              help="Grid points per axis.")
@click.option("--det-oracle", is_flag=True, help="Also scan the decoupling determinant and compare.")
@click.option("--psi", type=float, default=0.0, show_default=True, help="Yaw for the determinant scan.")
@click.option("--zeta", type=float, default=9.81, show_default=True, help="Thrust for the determinant scan.")
@click.option("--s-tol", type=float, default=1e-9, show_default=True)
@click.option("--det-tol", type=float, default=1e-9, show_default=True)
@params_option
@out_option
def singmap(half_width, res, det_oracle, psi, zeta, s_tol, det_tol, params_file, out_dir):
    """Map S(theta, phi) and optionally adjudicate it against the determinant."""
    if not half_width > 0:
        _fail(EXIT_USAGE, "--range must be positive")
    if det_oracle and zeta == 0:
        _fail(EXIT_USAGE, "--zeta must be nonzero for --det-oracle: the decoupling matrix needs zeta != 0")
    if det_oracle and half_width >= np.pi / 2:
        click.echo("note: cells with |angle| >= pi/2 are outside the Euler domain and left unevaluated",
                   err=True)
    p = _load_params(params_file)
    th_r, ph_r = default_ranges(half_width, res)
    out = _out_dir(out_dir)
    s_scan = scan_grid(th_r, ph_r, ScanKind.S_FUNCTION)
    try:
        contour = zero_contour(s_scan)
    except EmptyContour:
        contour = ContourSet([])
    try:
        s_scan.to_csv(out / "s_grid.csv")
        contour.to_csv(out / "s_contour.csv")
        click.echo(f"s_grid: {res}x{res} cells, contour: {len(contour)} polylines, "
                   f"{len(contour.vertices)} vertices")
        if det_oracle:
            det_scan = scan_grid(th_r, ph_r, ScanKind.DET_ORACLE, fixed_psi=psi, fixed_zeta=zeta, p=p)
            report = discrepancy_report(s_scan, det_scan, s_tol, det_tol)
            det_scan.to_csv(out / "det_grid.csv")
            report.to_csv(out / "discrepancy.csv")
            click.echo(f"discrepancy: {report.summary()}")
            origin = report.at(0.0, 0.0)
            if origin is not None:
                click.echo(f"cell nearest (0, 0): {origin.value}")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))


@cli.command()
@click.option("--scenario", required=True,
              help="Scenario JSON path, or the name of a bundled scenario (experiment1, experiment2).")
@out_option
@click.option("--prefix", default="", help="Prefix for the output file names.")
def simulate(scenario, out_dir, prefix):
    """Run a scenario and write the time series and event log as CSV."""
    path = Path(scenario)
    if not path.exists() and not scenario.endswith(".json"):
        path = scenario_path(scenario)
    try:
        sc = Scenario.from_json(path)
    except FileNotFoundError:
        _fail(EXIT_USAGE, f"scenario not found: {scenario}")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read scenario: {exc}")
    except ConfigError as exc:
        _fail(EXIT_USAGE, str(exc))
    ts = run_scenario(sc)
    out = _out_dir(out_dir)
    try:
        ts.to_csv(out / f"{prefix}timeseries.csv")
        ts.events_to_csv(out / f"{prefix}events.csv")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(ts.summary())


@cli.command()
@click.option("--samples", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--suite", "suites", multiple=True, type=click.Choice(list(SUITES)),
              help="Run only this suite (repeatable).")
@params_option
def verify(samples, seed, suites, params_file):
    """Cross-check independent derivations; exit 3 if any suite fails."""
    p = _load_params(params_file)
    results = run_suites(suites or None, samples, seed, p)
    for r in results:
        click.echo(r.line())
    failed = [r.name for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} suites passed")
    if failed:
        raise click.exceptions.Exit(EXIT_VERIFY)


@cli.command()
@click.option("--hover", is_flag=True, help="Start from the hover state (zeta = m g).")
@click.option("--state", help="14 comma-separated state values in the order x,y,z,psi,theta,phi,"
                              "vx,vy,vz,zeta,xi,p,q,r.")
@click.option("--zeta", type=float, help="Override the thrust.")
@click.option("--psi", type=float, help="Override yaw.")
@click.option("--theta", type=float, help="Override pitch.")
@click.option("--phi", type=float, help="Override roll.")
@click.option("--mode", default="yawpos", show_default=True,
              help="yawpos (x, y, z, psi) or altatt (z, phi, theta, psi).")
@params_option
def delta(hover, state, zeta, psi, theta, phi, mode, params_file):
    """Print the decoupling system at one state as JSON; exit 4 if it is singular."""
    p = _load_params(params_file)
    try:
        m = Mode.coerce(mode)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    if hover == (state is not None):
        _fail(EXIT_USAGE, "give exactly one of --hover or --state")
    if hover:
        s = State14.hover(p)
    else:
        try:
            vals = [float(v) for v in state.replace(" ", "").split(",")]
            if len(vals) != 14:
                raise ValueError(f"expected 14 values, got {len(vals)}")
            s = State14.from_array(vals)
        except ValueError as exc:
            _fail(EXIT_USAGE, f"malformed --state: {exc}")
    overrides = {k: v for k, v in (("zeta", zeta), ("psi", psi), ("theta", theta), ("phi", phi))
                 if v is not None}
    try:
        s = s.replace(**overrides)
        dsys = decoupling_system(m, s, p)
    except (DomainError, ValueError) as exc:
        _fail(EXIT_USAGE, str(exc))
    record = dsys.to_record()
    record["state"] = s.to_array().tolist()
    record["singular"] = bool(is_singular(dsys.det, dsys.cond, dsys.scale))
    click.echo(json.dumps(record, indent=2))
    if record["singular"]:
        raise click.exceptions.Exit(EXIT_SINGULAR)


def main(argv=None):
    return cli.main(args=argv, prog_name="singzone", auto_envvar_prefix="SINGZONE")


if __name__ == "__main__":
    sys.exit(main())
