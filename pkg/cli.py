# cli.py
"""
File: cli.py
Function:
    Command-line entry point. Each subcommand hands off to one page under modules/, the way
    the pages of a dashboard are selected from a navigation menu.

    Subcommands: list-codes, syndromes, dump-model, route, simulate, fstar.
    Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
"""

import logging
import os
import sys
from pathlib import Path

import click

import modules.catalog_listing as catalog_listing
import modules.fstar_recompute as fstar_recompute
import modules.model_dump as model_dump
import modules.route_report as route_report
import modules.simulation as simulation
import modules.syndrome_tables as syndrome_tables
from config import load_config

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_RUNTIME = 2


def _float_list(value: str) -> list:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from None


def _int_list(value: str) -> list:
    try:
        return [int(item) for item in value.replace("-", ",").split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected an order such as 8-7-4-5-2-1, got '{value}'") from None


@click.group()
@click.option("--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG.")
def cli(verbose: int):
    """Autonomous quantum memory toolkit."""
    default = os.environ.get("AQM_LOG_LEVEL", "WARNING").upper()
    level = {0: default, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


@cli.command("list-codes")
def list_codes():
    """Summary of the code catalog."""
    click.echo(catalog_listing.show_page())


@cli.command("syndromes")
@click.argument("code")
@click.option("--header", is_flag=True, help="Labelled table instead of the plain row format.")
def syndromes(code: str, header: bool):
    """Syndrome table of CODE: one row per single-qubit X, Z and Y error."""
    click.echo(syndrome_tables.show_page(code, header))


@cli.command("dump-model")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--theta", type=float, default=None, help="Loss value in radians (default: first configured).")
def dump_model(config_path: Path, theta):
    """Symbolic Hamiltonian and Lindblad list of a configured model."""
    config = load_config(config_path)
    click.echo(model_dump.show_page(config, theta))


@cli.command("route")
@click.argument("code")
@click.argument("generator")
@click.option(
    "--strategy",
    type=click.Choice(route_report.STRATEGIES),
    default="exhaustive",
    show_default=True,
)
@click.option("--order", default=None, help="Scattering order for --strategy given, e.g. 8-7-4-5-2-1.")
def route(code: str, generator: str, strategy: str, order):
    """Loss-prefix classification for GENERATOR (1-based index, Pauli text or 'all')."""
    parsed = _int_list(order) if order else None
    if parsed and strategy != "given":
        strategy = "given"
    click.echo(route_report.show_page(code, generator, strategy, parsed))


@cli.command("simulate")
@click.option("--config", "config_path", required=True, type=click.Path(path_type=Path))
@click.option("--workers", type=int, default=None, help="Worker processes (default: all cores).")
@click.option("--seed", type=int, default=None, help="Overrides SEED.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None, help="Overrides OUTPUT_DIR.")
@click.option("--progress/--no-progress", default=False)
def simulate(config_path: Path, workers, seed, out_dir, progress: bool):
    """Trajectory ensembles for every configured loss value; writes CSVs and figures."""
    overrides = {"seed": seed} if seed is not None else None
    config = load_config(config_path, overrides)
    n_workers = workers if workers is not None else (os.cpu_count() or 1)
    written = simulation.run_experiment(config, n_workers, out_dir, progress)
    for path in written:
        click.echo(str(path))


@cli.command("fstar")
@click.argument("trajectory_csv", type=click.Path(exists=True, path_type=Path))
@click.option("--tau", "taus", required=True, help="Comma-separated window widths, e.g. 0.05,0.1.")
@click.option("--out", type=click.Path(path_type=Path), default=None)
def fstar(trajectory_csv: Path, taus: str, out):
    """Recompute F and F*_tau summaries from a saved trajectory CSV."""
    click.echo(str(fstar_recompute.recompute(trajectory_csv, _float_list(taus), out)))


def main(argv=None) -> int:
    """Runs the CLI and maps failures onto exit codes."""
    try:
        cli.main(args=argv, prog_name="aqm", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted.", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_USAGE
    except (RuntimeError, OSError) as exc:
        click.echo(f"Runtime error: {exc}", err=True)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
