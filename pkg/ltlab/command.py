# -*- coding: utf-8 -*-
from contextlib import contextmanager
from functools import wraps
import os
import platform
import sys

import click

from ltlab import __version__, log, logger, settings
from ltlab.campaign import CampaignConfig, resolve_workers, run_campaign
from ltlab.constants import (
    C_KELLER,
    C_THM1,
    R,
    lt_bound,
    lt_classical,
    lt_classical_quadrature,
    named_constants,
)
from ltlab.exceptions import InvalidArgument, LtlabError
from ltlab.extremal import SearchSpace, nelder_mead, restarts, sweep
from ltlab.grid import Grid, grid_for_spacing
from ltlab.ltcheck import check_lieb_thirring, check_proof_chain, check_theorem2_separable
from ltlab.potentials import PotentialSpec
from ltlab.report import emit_report, emit_rows, emit_search
from ltlab.settings import print_settings
from ltlab.sobolev import (
    agmon_check,
    check_sobolev,
    dilated_gaussian,
    equality_grid,
    gaussian_system,
    random_system,
)
from ltlab.utils import format_exc, json_dumps


def comma_separated_list(value):
    """
    Transforms a comma-separated list into a list of strings.
    """
    return value.split(",")


def parse_range(value):
    """
    ``NAME=LO:HI`` (or ``NAME=VALUE`` for a fixed parameter).

    >>> parse_range("s=0.1:1")
    ('s', (0.1, 1.0))
    """
    try:
        name, bounds = value.split("=", 1)
        if ":" in bounds:
            lower, upper = bounds.split(":", 1)
        else:
            lower = upper = bounds
        return name.strip(), (float(lower), float(upper))
    except ValueError:
        raise click.BadParameter('expected NAME=LO:HI, got {!r}'.format(value))


def output_options(func):
    func = click.option('--out', type=click.Path(dir_okay=False, writable=True),
                        help='Write the output to FILE instead of stdout.')(func)
    func = click.option('--csv', 'as_csv', is_flag=True, default=False, help='CSV output.')(func)
    func = click.option('--json', 'as_json', is_flag=True, default=False, help='JSON output.')(func)
    return func


def grid_options(func):
    func = click.option('--n-interior', type=int, help='Number of interior nodes (overrides --h).')(func)
    func = click.option('--h', 'spacing', type=float, help='Grid spacing.')(func)
    func = click.option('--L', 'half_width', type=float, help='Half width of the box [-L, L].')(func)
    return func


def output_format(as_json, as_csv, default='human'):
    if as_json and as_csv:
        raise click.UsageError('--json and --csv are mutually exclusive')
    if as_json:
        return 'json'
    if as_csv:
        return 'csv'
    return default


def make_grid_option(half_width, spacing, n_interior):
    if half_width is None and spacing is None and n_interior is None:
        return None
    half_width = half_width if half_width is not None else settings.LTLAB_HALF_WIDTH
    if n_interior is not None:
        return Grid(half_width, n_interior)
    return grid_for_spacing(half_width, spacing if spacing is not None else settings.LTLAB_SPACING)


def write_output(text, out):
    if out:
        with open(out, "w") as fd:
            fd.write(text)
            if not text.endswith("\n"):
                fd.write("\n")
    else:
        click.echo(text)


def load_spec(path):
    try:
        with open(path) as fd:
            return PotentialSpec.from_json(fd.read())
    except (IOError, OSError, ValueError) as err:
        raise InvalidArgument('cannot load spec {}: {}'.format(path, err))


def handle_errors(func):
    """
    Library errors end the command with exit code 1.
    """
    @wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LtlabError as err:
            logger.error(format_exc(err))
            raise click.exceptions.Exit(1)
    return wrapped


def finish(ctx, passed):
    ctx.exit(0 if passed else 1)


@click.group()
@click.option('--color',
              type=click.Choice([
                  log.ColorModes.AUTO,
                  log.ColorModes.ALWAYS,
                  log.ColorModes.NEVER
              ]),
              default=log.ColorModes.AUTO)
@click.option('--log-level', type=click.Choice(log.LEVELS, case_sensitive=False),
              help='Override LOG_LEVEL for this run.')
@click.version_option(version=__version__)
@click.pass_context
def cli(ctx, color, log_level):
    log.color_mode = color
    if log_level:
        log.set_level(log_level)


@click.option('--quadrature', is_flag=True, default=False,
              help='Cross-check Lcl by radial quadrature (d <= 3).')
@click.option('--gamma', type=float, default=1.0, show_default=True)
@click.option('--d', 'dimension', type=int, default=1, show_default=True)
@output_options
@cli.command('constants', help='Semiclassical constant Lcl(d, gamma), the bound R*Lcl and the named constants.')
@click.pass_context
@handle_errors
def constants(ctx, dimension, gamma, quadrature, as_json, as_csv, out):
    table = named_constants([(dimension, gamma)])
    rows = [
        ('Lcl', lt_classical(dimension, gamma)),
        ('bound', lt_bound(dimension, gamma)),
        ('c_thm1', C_THM1),
        ('R', R),
        ('c_keller', C_KELLER),
        ('2Lcl(1,1)', table.twice_lcl_1_1),
    ]
    if quadrature:
        rows.insert(1, ('Lcl_quadrature', lt_classical_quadrature(dimension, gamma)))
    fmt = output_format(as_json, as_csv)
    if fmt == 'json':
        data = table.to_dict()
        data.update({"d": dimension, "gamma": gamma, "Lcl": rows[0][1], "bound": lt_bound(dimension, gamma)})
        if quadrature:
            data["Lcl_quadrature"] = rows[1][1]
        write_output(json_dumps(data), out)
    else:
        write_output(emit_rows(('name', 'value'), rows, fmt), out)
    finish(ctx, table.ordered())


@click.option('--proof-chain', is_flag=True, default=False,
              help='Also replay the energy identity, Hoelder, Sobolev and minimization steps.')
@click.option('--sep', 'sep_path', type=click.Path(exists=True, dir_okay=False),
              help='Second 1D factor for the separable d=2 check.')
@click.option('--d', 'dimension', type=click.Choice(['1', '2']), default='1', show_default=True)
@click.option('--gamma', type=float, multiple=True, help='Riesz exponent (repeatable, default 1).')
@click.option('--spec', 'spec_path', type=click.Path(exists=True, dir_okay=False), required=True,
              help='PotentialSpec JSON file.')
@grid_options
@output_options
@cli.command('check', help='Check the Lieb-Thirring inequality for a potential.')
@click.pass_context
@handle_errors
def check(ctx, spec_path, gamma, dimension, sep_path, proof_chain,
          half_width, spacing, n_interior, as_json, as_csv, out):
    spec = load_spec(spec_path)
    grid = make_grid_option(half_width, spacing, n_interior)
    gammas = gamma or (1.0,)
    reports = []
    if dimension == '2':
        if not sep_path:
            raise click.UsageError('--d 2 needs --sep SPEC2.json')
        spec2 = load_spec(sep_path)
        for g in gammas:
            reports.append(check_theorem2_separable(spec, spec2, g, grid))
    else:
        for g in gammas:
            reports.append(check_lieb_thirring(spec, grid, g))
        if proof_chain:
            reports.extend(check_proof_chain(spec, grid))
    write_output(emit_report(reports, output_format(as_json, as_csv)), out)
    finish(ctx, all(report.passed for report in reports))


@click.option('--workers', type=int, help='Worker processes (overrides LTLAB_WORKERS).')
@click.option('--points', type=int, default=11, show_default=True, help='Lattice points per free axis.')
@click.option('--param', 'params', multiple=True, callback=lambda ctx, param, values: [parse_range(v) for v in values],
              help='Parameter range NAME=LO:HI (repeatable).')
@click.option('--gamma', type=float, default=1.0, show_default=True)
@click.option('--family', default='pt', show_default=True,
              type=click.Choice(['pt', 'gaussian', 'gaussian_pair', 'square']))
@grid_options
@output_options
@cli.command('sweep', help='Evaluate the Lieb-Thirring ratio on a parameter lattice.')
@click.pass_context
@handle_errors
def sweep_command(ctx, family, gamma, params, points, workers,
                  half_width, spacing, n_interior, as_json, as_csv, out):
    space = SearchSpace(family, dict(params), gamma, grid=make_grid_option(half_width, spacing, n_interior))
    result = sweep(space, points, resolve_workers(workers))
    write_output(emit_search(result, output_format(as_json, as_csv)), out)
    finish(ctx, not result.meta.get("exceeds_bound"))


@click.option('--agmon', is_flag=True, default=False, help='Also check the Agmon inequality on the Gaussian.')
@click.option('--b', 'dilation', type=float, default=1.0, show_default=True, help='Gaussian dilation.')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--M', 'channels', type=int, default=1, show_default=True)
@click.option('--N', 'size', type=int, default=1, show_default=True)
@click.option('--random', 'use_random', is_flag=True, default=False,
              help='Random orthonormal system instead of the Gaussian.')
@grid_options
@output_options
@cli.command('sobolev', help='Check the trace Sobolev inequality on an orthonormal system.')
@click.pass_context
@handle_errors
def sobolev(ctx, use_random, size, channels, seed, dilation, agmon,
            half_width, spacing, n_interior, as_json, as_csv, out):
    grid = make_grid_option(half_width, spacing, n_interior)
    if use_random:
        system = random_system(size, channels, seed, grid)
        report = check_sobolev(system)
        report.label = 'random(N={},M={},seed={})'.format(size, channels, seed)
    else:
        grid = grid or equality_grid()
        report = check_sobolev(gaussian_system(grid, dilation))
        report.label = 'gaussian(b={:g})'.format(dilation)
    reports = [report]
    if agmon:
        agmon_grid = grid or equality_grid()
        agmon_report = agmon_check(dilated_gaussian(agmon_grid, dilation))
        agmon_report.label = 'agmon(b={:g})'.format(dilation)
        reports.append(agmon_report)
    write_output(emit_report(reports, output_format(as_json, as_csv)), out)
    finish(ctx, all(r.passed for r in reports))


@click.option('--workers', type=int, help='Worker processes for restarts.')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--restarts', 'restart_count', type=int, default=0, help='Random restarts (0: single run).')
@click.option('--start', 'starts', multiple=True,
              callback=lambda ctx, param, values: [parse_range(v) for v in values],
              help='Start value NAME=VALUE (repeatable, default: box center).')
@click.option('--param', 'params', multiple=True, callback=lambda ctx, param, values: [parse_range(v) for v in values],
              help='Parameter range NAME=LO:HI (repeatable).')
@click.option('--budget', type=int, default=200, show_default=True)
@click.option('--gamma', type=float, default=1.0, show_default=True)
@click.option('--family', default='pt', show_default=True,
              type=click.Choice(['pt', 'gaussian', 'gaussian_pair', 'square']))
@grid_options
@output_options
@cli.command('extremal', help='Nelder-Mead search for the largest Lieb-Thirring ratio in a family.')
@click.pass_context
@handle_errors
def extremal(ctx, family, gamma, budget, params, starts, restart_count, seed, workers,
             half_width, spacing, n_interior, as_json, as_csv, out):
    space = SearchSpace(family, dict(params), gamma, grid=make_grid_option(half_width, spacing, n_interior))
    fmt = output_format(as_json, as_csv)
    if restart_count:
        results = restarts(space, restart_count, seed, budget, resolve_workers(workers))
    else:
        start = None
        if starts:
            chosen = dict((name, lower) for name, (lower, _) in starts)
            center = space.params(space.center())
            start = [chosen.get(name, center[name]) for name in space.free]
        results = [nelder_mead(space, start, budget)]
    write_output("\n".join(emit_search(result, fmt) for result in results), out)
    finish(ctx, not any(result.meta.get("exceeds_bound") for result in results))


@click.option('--seed', type=int, help='Top-level seed (overrides the config file).')
@click.option('--workers', type=int, help='Worker processes (overrides LTLAB_WORKERS and the config file).')
@click.argument('config_path', type=click.Path(exists=True, dir_okay=False))
@output_options
@cli.command('campaign', help='Run every job of a campaign CONFIG file.')
@click.pass_context
@handle_errors
def campaign(ctx, config_path, workers, seed, as_json, as_csv, out):
    config = CampaignConfig.from_file(config_path)
    if seed is not None:
        config.seed = seed
    reports = run_campaign(config, resolve_workers(workers, config.workers))
    write_output(emit_report(reports, output_format(as_json, as_csv, config.format)), out)
    finish(ctx, all(report.passed for report in reports))


@click.argument("sections", required=False, default="versions,settings,environment", type=comma_separated_list)
@cli.command("info", help="Display versions, settings, and environment variables. "
                          "Available sections: versions, settings, environment.")
def info(sections):
    @contextmanager
    def section(title):
        print(log.colorize("BLUE", "# {}".format(title)))
        yield
        print("")

    if "versions" in sections:
        with section("Versions"):
            import numpy
            import scipy
            print("ltlab: {}".format(__version__))
            print("numpy: {}".format(numpy.__version__))
            print("scipy: {}".format(scipy.__version__))
            version, build = sys.version.split("\n", 1) if "\n" in sys.version else (sys.version, "")
            print("python_version: {}".format(version))
            print("python_build: {}".format(build))
            print("platform: {}".format(platform.platform()))

    if "settings" in sections:
        with section("Settings"):
            print_settings()

    if "environment" in sections:
        with section("Environment LTLAB*"):
            for key in sorted(os.environ.keys()):
                if not key.startswith("LTLAB"):
                    continue
                print("{}={}".format(key, os.environ[key]))


def run(argv=None):
    """
    Run the command line and return its exit code: 0 when every check
    passes, 1 on a failed check or library error, 2 on usage errors.
    """
    try:
        rv = cli.main(args=argv, prog_name="ltlab", standalone_mode=False)
    except click.exceptions.Exit as err:
        return err.exit_code
    except click.exceptions.Abort:
        return 1
    except click.ClickException as err:
        err.show()
        return err.exit_code
    except LtlabError as err:
        logger.error(format_exc(err))
        return 1
    return rv if isinstance(rv, int) else 0


def main():
    sys.exit(run(sys.argv[1:]))
