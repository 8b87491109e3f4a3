"""
Command-line surface: every verb reads JSON files and writes one JSON document.

Exit codes: 0 success, 1 domain or internal error, 2 validation or axiom
failure, 64 usage. Every failure still prints a JSON error document.
"""
import functools
import json
import logging
import sys

import click

from . import commands
from .errors import BuildingError
from .serialization import dumps, load_json

logger = logging.getLogger(__name__)

EXIT_USAGE = 64


def _emit(payload) -> None:
    click.echo(dumps(payload))


def reports_errors(func):
    """Print BuildingError as structured JSON and exit with its code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except BuildingError as error:
            logger.debug("%s failed: %s", func.__name__, error.message)
            _emit(error.to_dict())
            raise click.exceptions.Exit(error.exit_code)

    return wrapper


class BuildingsGroup(click.Group):
    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as error:
            _emit({"error": "usage_error", "message": error.format_message(), "witness": None})
            sys.exit(EXIT_USAGE)
        except click.ClickException as error:
            _emit({"error": "parse_error", "message": error.format_message(), "witness": None})
            sys.exit(1)
        except click.Abort:
            sys.exit(1)
        except Exception as error:
            logger.debug("Unexpected failure", exc_info=True)
            _emit({"error": "internal_error", "message": str(error), "witness": {"type": type(error).__name__}})
            sys.exit(1)
        sys.exit(rv if isinstance(rv, int) else 0)


atlas_option = click.option("--atlas", "atlas", required=True, type=click.Path(dir_okay=False), help="Atlas JSON file")


@click.group(cls=BuildingsGroup)
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on standard error")
def cli(verbose):
    """Exact computations in affine Λ-buildings presented by atlases."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@atlas_option
@click.option("--p", "p", required=True, help="Point literal CHART:[[...]]")
@click.option("--q", "q", required=True, help="Point literal CHART:[[...]]")
@reports_errors
def distance(atlas, p, q):
    """Λ-valued distance of two points."""
    _emit(commands.distance(load_json(atlas), p, q))


@cli.command()
@atlas_option
@click.option("--point", "points", multiple=True, required=True, help="Point literal, repeatable")
@reports_errors
def hull(atlas, points):
    """Weyl-convex hull of points in one chart."""
    _emit(commands.hull(load_json(atlas), points))


@cli.command()
@atlas_option
@reports_errors
def validate(atlas):
    """Check convexity, transitions and cocycles."""
    _emit(commands.validate_atlas(load_json(atlas)))


@cli.command("check-axioms")
@atlas_option
@click.option("--witnesses", type=click.Path(dir_okay=False), help="Witness points and germs JSON file")
@reports_errors
def check_axioms(atlas, witnesses):
    """Report on axioms A1-A6; exit 2 when one fails."""
    report, passed = commands.check(load_json(atlas), load_json(witnesses) if witnesses else None)
    _emit(report)
    if not passed:
        raise click.exceptions.Exit(2)


@cli.command()
@atlas_option
@click.option("--chart", required=True, help="Target chart")
@click.option("--germ", required=True, help='Germ JSON: {"chart", "base", "word", "face"}')
@click.option("--p", "p", required=True, help="Point literal CHART:[[...]]")
@reports_errors
def retract(atlas, chart, germ, p):
    """Retraction onto a chart centered at a germ."""
    _emit(commands.retract(load_json(atlas), chart, _json_option(germ, "--germ"), p))


@cli.command()
@atlas_option
@click.option("--p", "p", required=True, help="Point literal CHART:[[...]]")
@reports_errors
def residue(atlas, p):
    """Chamber classes of the residue at a point."""
    _emit(commands.residue(load_json(atlas), p))


@cli.command()
@atlas_option
@reports_errors
def boundary(atlas):
    """Chamber classes of the building at infinity."""
    _emit(commands.boundary(load_json(atlas)))


@cli.command()
@atlas_option
@click.option("--epi-keep", type=int, help="Keep the first s positions of Λ")
@click.option("--mono-positions", help="JSON list of 1-based target positions")
@click.option("--mono-scales", help='JSON list of positive "p/q" scales')
@click.option("--target-rank", type=int, help="Rank of the target group")
@reports_errors
def basechange(atlas, epi_keep, mono_positions, mono_scales, target_rank):
    """Image of the atlas under a base change of Λ."""
    spec = {}
    if epi_keep is not None:
        spec["epi_keep"] = epi_keep
    if mono_positions:
        spec["mono_positions"] = _json_option(mono_positions, "--mono-positions")
    if mono_scales:
        spec["mono_scales"] = _json_option(mono_scales, "--mono-scales")
    if target_rank is not None:
        spec["target_rank"] = target_rank
    _emit(commands.basechange(load_json(atlas), spec))


@cli.command()
@atlas_option
@click.option("--epi-keep", type=int, required=True, help="Keep the first s positions of Λ")
@click.option("--p", "p", required=True, help="Point literal CHART:[[...]]")
@reports_errors
def fiber(atlas, epi_keep, p):
    """Fiber building over ker(e) through a point."""
    _emit(commands.fiber_at(load_json(atlas), epi_keep, p))


@cli.command("fixed-point")
@atlas_option
@click.option("--generators", required=True, type=click.Path(dir_okay=False), help="Generators JSON file")
@click.option("--x0", help="Starting point literal")
@reports_errors
def fixed_point(atlas, generators, x0):
    """Fixed point of a finite isometry group, with its layer trace."""
    _emit(commands.fixed(load_json(atlas), load_json(generators), x0))


def _json_option(raw: str, name: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError as error:
        raise click.BadParameter(error.msg, param_hint=name)


def main() -> None:
    cli()
