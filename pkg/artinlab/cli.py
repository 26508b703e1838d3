"""
Command-Line Interface for artinlab

Main entry point for the artinlab command. Exit codes: 0 when every checked
identity holds, 1 on a violation, 2 on usage or input errors, 3 when a
budget is exceeded.
"""

import functools
import logging
import sys
from fractions import Fraction
from typing import Dict, List

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from . import __version__
from .artin import (beta_bruteforce, exhaustive_square_search, greenberg_contrast,
                    quadratic_lower_bound, quadratic_witness, square_obstruction)
from .config import OUTPUT_FORMATS, RunConfig
from .construction import (Regime, build_triple, default_precision, distance_to_root,
                           sweep_triples)
from .diophantine import CSV_COLUMNS, fits_by_p, gamma_profile, liouville_table, norm_constants
from .error import (ArtinLabError, BadParameters, BudgetError, CharTwo, ConfigError,
                    DimensionMismatch, IndeterminateOrder, MixedFields, NonReducibleModQ,
                    PolySyntaxError, PrecisionIncrease, PrecisionTooLow, PresetError)
from .oracles import ORACLE_NAMES, create_oracle
from .parser import parse_poly
from .presets import PresetManager
from .storage import write_report


console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

USAGE_ERRORS = (BadParameters, CharTwo, ConfigError, DimensionMismatch, MixedFields,
                NonReducibleModQ, PolySyntaxError, PrecisionTooLow, PrecisionIncrease, PresetError)


class RangeType(click.ParamType):
    """Integers written as 'a..b', 'a' or comma-separated pieces of those"""

    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return [int(v) for v in value]
        if isinstance(value, int):
            return [value]
        result: List[int] = []
        try:
            for piece in str(value).split(","):
                piece = piece.strip()
                if ".." in piece:
                    low, high = piece.split("..", 1)
                    low, high = int(low), int(high)
                    if high < low:
                        self.fail(f"empty range {piece!r}", param, ctx)
                    result.extend(range(low, high + 1))
                else:
                    result.append(int(piece))
        except ValueError:
            self.fail(f"{value!r} is not an integer range like 3..8", param, ctx)
        return result


RANGE = RangeType()


def setup_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def fail(message: str, code: int):
    err_console.print(f"[red]Error: {escape(message)}[/red]")
    sys.exit(code)


def handle_errors(func):
    """Map library errors onto the exit-code contract"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BudgetError as exc:
            fail(str(exc), EXIT_BUDGET)
        except USAGE_ERRORS as exc:
            fail(str(exc), EXIT_USAGE)
        except ArtinLabError as exc:
            fail(str(exc), EXIT_VIOLATION)

    return wrapper


def settings(ctx, **overrides) -> RunConfig:
    return ctx.obj['config'].merged(**overrides)


def pick_format(ctx, requested, default: str) -> str:
    """--format, else a format set in the config file, else the command's default"""
    if requested:
        return requested
    config = ctx.obj['config']
    if "format" in config.model_fields_set:
        return config.format
    return default


def finite_field_settings(ctx, field, jobs) -> RunConfig:
    # Jet enumeration needs a finite field; F3 stands in when none was chosen
    config = settings(ctx, field=field, jobs=jobs)
    if field is None and not config.descriptor.is_prime:
        config = config.merged(field="F3")
    return config


def finish(passed: bool):
    if not passed:
        sys.exit(EXIT_VIOLATION)


field_option = click.option('--field', help='Coefficient field: Q or F<q>')
jobs_option = click.option('--jobs', type=int, help='Parallel workers')
format_option = click.option('--format', 'fmt', type=click.Choice(OUTPUT_FORMATS),
                             help='Output format')
out_option = click.option('--out', type=click.Path(dir_okay=False), help='Output file')


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='Verbose output')
@click.option('--config', 'config_path', type=click.Path(dir_okay=False),
              help='Settings file (JSON, YAML or TOML)')
@click.pass_context
def cli(ctx, verbose, config_path):
    """artinlab - Artin functions and the counterexamples behind them"""
    ctx.ensure_object(dict)
    try:
        config = RunConfig.from_file(config_path) if config_path else RunConfig()
    except ConfigError as exc:
        fail(str(exc), EXIT_USAGE)
    verbose = verbose or config.verbose
    setup_logging(verbose)
    ctx.obj['config'] = config
    ctx.obj['verbose'] = verbose


@cli.command('verify-counterexample')
@click.option('--p', 'ps', type=RANGE, required=True, help='p value or range a..b')
@click.option('--k', 'ks', type=RANGE, required=True, help='k value or range a..b')
@field_option
@click.option('--precision', type=int, help='Working precision (default (p+2)k - 4 + guard)')
@jobs_option
@format_option
@out_option
@click.pass_context
@handle_errors
def verify_counterexample(ctx, ps, ks, field, precision, jobs, fmt, out):
    """Check ord P(u, v, z), ord(x_p - u/v) and the square obstruction"""
    config = settings(ctx, field=field, jobs=jobs)
    descriptor = config.descriptor
    if precision is None and config.jobs > 1:
        triples = sweep_triples(ps, ks, descriptor, config.guard, config.jobs)
    else:
        triples = []
        for p in ps:
            for k in ks:
                working = default_precision(p, k, config.guard) if precision is None else precision
                triples.append(build_triple(p, k, descriptor, working))
    certificates: Dict[int, object] = {}
    rows = []
    passed = True
    for triple in triples:
        p, k = triple.p, triple.k
        if p not in certificates:
            certificates[p] = square_obstruction(p, descriptor)
        certificate = certificates[p]
        distance_pred = (p - 2) * k + 1
        try:
            distance = distance_to_root(p, k, triple.precision, descriptor)
        except IndeterminateOrder:
            distance = None
        if triple.regime is Regime.EQ:
            distance_ok = distance == distance_pred
        else:
            distance_ok = distance is None or distance >= distance_pred
        ok = triple.holds() and distance_ok and certificate.max_order == p
        passed = passed and ok
        rows.append({
            "p": p,
            "k": k,
            "field": descriptor.label,
            "regime": triple.regime.value,
            "ordP_pred": triple.predicted_ordP,
            "ordP": triple.measured_ordP,
            "min_ord_pred": triple.predicted_min_uv_ord,
            "min_ord": triple.min_uv_ord,
            "distance_pred": distance_pred,
            "distance": distance,
            "square_order": certificate.max_order,
            "status": "pass" if ok else "fail",
        })
    write_report(rows, pick_format(ctx, fmt, "table"), out, title="Counterexample orders",
                 console=console)
    finish(passed)


@cli.command()
@click.option('--p', 'ps', type=RANGE, required=True, help='p value or range a..b')
@click.option('--k', 'ks', type=RANGE, required=True, help='k value or range a..b')
@field_option
@click.option('--fit', is_flag=True, help='Report the affine fit per p instead of the records')
@click.option('--gamma', is_flag=True,
              help='Report the best measured order per p and ord v instead of the records')
@jobs_option
@format_option
@out_option
@click.pass_context
@handle_errors
def dioph(ctx, ps, ks, field, fit, gamma, jobs, fmt, out):
    """Approximation orders ord(x_p - u_{p,k}/v_k) against ord(v_k)"""
    if fit and gamma:
        raise BadParameters("--fit and --gamma are separate views; pick one")
    config = settings(ctx, field=field, jobs=jobs)
    records = liouville_table(ps, ks, config.descriptor, config.guard, config.jobs)
    fmt = pick_format(ctx, fmt, "csv")
    if gamma:
        rows = [{"p": p, "ord_v": ord_v, "ord_distance": best}
                for p, row in gamma_profile(records).items() for ord_v, best in row.items()]
        write_report(rows, fmt, out, columns=["p", "ord_v", "ord_distance"],
                     title="Approximation profile", console=console)
        finish(all(record.matches_prediction() for record in records))
        return
    if not fit:
        write_report([record.to_row() for record in records], fmt, out, columns=CSV_COLUMNS,
                     title="Approximation orders", console=console)
        finish(all(record.matches_prediction() for record in records))
        return
    rows = []
    passed = True
    for p, line in fits_by_p(records).items():
        slope_pred = Fraction(p, 2) - 1
        ok = line.is_exact() and line.a == slope_pred
        passed = passed and ok
        exponent, log_k = norm_constants(line)
        rows.append({
            "p": p,
            "slope": line.a,
            "intercept": line.b,
            "residual_max": line.residual_max,
            "slope_pred": slope_pred,
            "c": exponent,
            "log_K": log_k,
            "status": "pass" if ok else "fail",
        })
    write_report(rows, fmt, out, title="Affine fits", console=console)
    finish(passed)


@cli.command('square-obstruction')
@click.option('--p', 'ps', type=RANGE, required=True, help='p value or range a..b')
@field_option
@click.option('--max-search-order', type=int, help='Give up once the residual reaches this order')
@click.option('--exhaustive/--no-exhaustive', default=False,
              help='Cross-check with the exhaustive search')
@click.option('--degree-bound', type=int, help='Degree bound of the exhaustive search (default p+1)')
@format_option
@out_option
@click.pass_context
@handle_errors
def square_obstruction_cmd(ctx, ps, field, max_search_order, exhaustive, degree_bound, fmt, out):
    """Certify sup ord(z_p - t^2) = p"""
    config = settings(ctx, field=field)
    descriptor = config.descriptor
    rows = []
    passed = True
    for p in ps:
        certificate = square_obstruction(p, descriptor, max_search_order)
        row = certificate.to_dict()
        ok = certificate.max_order == p and certificate.verify()
        if exhaustive:
            result = exhaustive_square_search(p, descriptor, degree_bound,
                                              budget=config.search_budget)
            row["exhaustive_max"] = result.max_order
            row["candidates"] = result.candidates
            ok = ok and result.max_order == p
        row["status"] = "pass" if ok else "fail"
        passed = passed and ok
        rows.append(row)
    write_report(rows, pick_format(ctx, fmt, "table"), out, title="Square obstruction",
                 console=console)
    finish(passed)


@cli.command('beta-bound')
@click.option('--i', 'indices', type=RANGE, required=True, help='i value or range a..b')
@field_option
@format_option
@out_option
@click.pass_context
@handle_errors
def beta_bound(ctx, indices, field, fmt, out):
    """Quadratic lower bounds for the Artin function of X^2 - Z*Y^2"""
    config = settings(ctx, field=field)
    descriptor = config.descriptor
    witnesses = {}
    rows = []
    passed = True
    for i in indices:
        even = i - (i % 2)
        if even not in witnesses:
            witnesses[even] = quadratic_witness(even, descriptor)
        witness = witnesses[even]
        row = witness.to_row()
        row["i"] = i
        row["via"] = even
        row["lower_bound"] = quadratic_lower_bound(i)
        passed = passed and witness.holds()
        rows.append(row)
    columns = ["i", "via", "k", "p", "lower_bound", "ord_P", "max_square_order", "ord_v", "status"]
    write_report(rows, pick_format(ctx, fmt, "table"), out, columns=columns,
                 title="Quadratic lower bounds", console=console)
    finish(passed)


@cli.command('artin-estimate')
@click.option('--poly', required=True, help='Polynomials, e.g. "X^2 - Z*Y^2"')
@click.option('--N', 'num_series_vars', type=int, default=1, show_default=True,
              help='Series variables')
@click.option('--n', 'num_unknowns', type=int, default=1, show_default=True, help='Unknowns')
@click.option('--i', 'indices', type=RANGE, required=True, help='i value or range a..b')
@field_option
@click.option('--jet-order', type=int, help='Jet order (default i+2)')
@click.option('--horizon', type=int, help='Lifting horizon (default the jet order)')
@click.option('--oracle', 'oracle_name', type=click.Choice(ORACLE_NAMES), default='horizon',
              show_default=True, help='Solution-membership test')
@click.option('--timing', is_flag=True, default=None, help='Report timing_ms')
@jobs_option
@format_option
@out_option
@click.pass_context
@handle_errors
def artin_estimate(ctx, poly, num_series_vars, num_unknowns, indices, field, jet_order,
                   horizon, oracle_name, timing, jobs, fmt, out):
    """Brute-force beta(i) over a finite field"""
    config = finite_field_settings(ctx, field, jobs)
    config = config.merged(timing=timing)
    system = parse_poly(poly, num_series_vars, num_unknowns, config.descriptor)
    rows = []
    for i in indices:
        order = i + 2 if jet_order is None else jet_order
        lift_horizon = order if horizon is None else horizon
        oracle = create_oracle(oracle_name, horizon=lift_horizon, budget=config.lift_budget)
        record = beta_bruteforce(system, i, jet_order=order, horizon=lift_horizon,
                                 membership_oracle=oracle, budget=config.jet_budget,
                                 lift_budget=config.lift_budget, jobs=config.jobs,
                                 timing=config.timing)
        rows.append(record.to_dict())
    write_report(rows, pick_format(ctx, fmt, "json"), out, title="Artin function",
                 console=console, single=True)


@cli.command()
@field_option
@click.option('--max-i', type=int, default=3, show_default=True, help='Largest i')
@click.option('--max-jet-order', type=int, default=5, show_default=True, help='Jet order cap')
@jobs_option
@format_option
@out_option
@click.pass_context
@handle_errors
def greenberg(ctx, field, max_i, max_jet_order, jobs, fmt, out):
    """beta(i) for one-variable systems, bounded by affine functions"""
    config = finite_field_settings(ctx, field, jobs)
    report = greenberg_contrast(config.descriptor, max_i, max_jet_order,
                                budget=config.jet_budget, jobs=config.jobs)
    rows = []
    for row in report.rows:
        line = report.fits.get(row.system)
        rows.append({
            "system": row.system,
            "i": row.i,
            "jet_order": row.jet_order,
            "beta": row.beta,
            "beta_lower": row.beta_lower,
            "exact": row.exact,
            "affine_bound": None if line is None else line(row.i),
        })
    write_report(rows, pick_format(ctx, fmt, "table"), out, title="One-variable systems",
                 console=console)
    finish(report.affine_bounded())


@cli.command('list-presets')
def list_presets():
    """List available presets"""
    preset_mgr = PresetManager()
    console.print("[cyan]Available Presets:[/cyan]\n")
    for i, preset_name in enumerate(preset_mgr.list_presets(), 1):
        preset = preset_mgr.get_preset(preset_name)
        desc = preset.get('description', 'No description')
        console.print(f"  {i}. [green]{preset_name:25s}[/green] - {escape(desc)}")


@cli.command('show-preset')
@click.argument('preset_name')
@handle_errors
def show_preset(preset_name):
    """Show preset details"""
    console.print(escape(PresetManager().show_preset(preset_name)))


def preset_argv(args: Dict) -> List[str]:
    argv = []
    for key, value in sorted(args.items()):
        option = "--" + key.replace("_", "-")
        if value is True:
            argv.append(option)
        elif value is False:
            argv.append("--no-" + key.replace("_", "-"))
        else:
            argv.extend([option, str(value)])
    return argv


@cli.command('run-preset')
@click.argument('preset_name')
@format_option
@out_option
@click.pass_context
@handle_errors
def run_preset(ctx, preset_name, fmt, out):
    """Run a named experiment"""
    preset = PresetManager().get_preset(preset_name)
    argv = preset_argv(preset['args'])
    if fmt:
        argv.extend(["--format", fmt])
    if out:
        argv.extend(["--out", out])
    command = cli.get_command(ctx, preset['command'])
    if ctx.obj['verbose']:
        err_console.print(f"[green]Running {preset['command']} {' '.join(argv)}[/green]")
    with command.make_context(command.name, argv, parent=ctx) as sub_ctx:
        command.invoke(sub_ctx)


@cli.command()
def info():
    """Show version and supported settings"""
    console.print(f"[cyan]artinlab v{__version__}[/cyan]\n")
    console.print("[cyan]Fields:[/cyan]")
    console.print("  Q, F<q> for an odd prime q (jet enumeration needs F<q>)")
    console.print("\n[cyan]Membership oracles:[/cyan]")
    console.print(f"  {', '.join(ORACLE_NAMES)}")
    console.print("\n[cyan]Supported formats:[/cyan]")
    console.print(f"  {', '.join(OUTPUT_FORMATS)}")
    console.print("\n[cyan]Exit codes:[/cyan]")
    console.print("  0 pass, 1 violation, 2 usage, 3 budget")


def main():
    """Main entry point"""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        err_console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(130)
    except Exception as e:
        err_console.print(f"[red]Unexpected error: {escape(str(e))}[/red]")
        sys.exit(1)


if __name__ == '__main__':
    main()
