"""Command-line front end.

.. code-block:: bash

    nlqec check --scenario example1_coherent --out report.json
    nlqec recover --config cat.yaml
    nlqec sweep --config sweep.json --jobs 4 --out table.csv
    nlqec check --emit-config example4_cat > cat.json
"""

import sys
from collections.abc import Callable
from functools import wraps

import click
from rich.console import Console
from rich.table import Table

from nlqec import __version__
from nlqec.antypes import Report, ScenarioConfig
from nlqec.core.errors import ConfigError, NLQECError
from nlqec.core.logs import get_logger, set_level
from nlqec.core.settings import LOG_LEVELS
from nlqec.scenarios import (
    ScenarioRunner,
    dump_config,
    get_scenario,
    load_config,
    run_sweep,
    write_sweep,
)

console = Console(stderr=True)
logger = get_logger("nlqec.cli")


def _resolve(config_path: str | None, scenario: str | None) -> ScenarioConfig:
    if config_path and scenario:
        raise ConfigError("Use either --config or --scenario, not both")
    if scenario:
        return get_scenario(scenario)
    if config_path:
        return load_config(config_path)
    raise ConfigError("Provide --config or --scenario")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as file:
            file.write(text)
    else:
        click.echo(text)


def _summary(report: Report) -> None:
    table = Table(title=f"{report.command} [{report.scenario}]")
    table.add_column("quantity")
    table.add_column("value", overflow="fold")
    criterion = report.criterion
    if criterion is not None:
        table.add_row("verdict", criterion.verdict)
        table.add_row("residual_rel", f"{criterion.residual_rel:.3e}")
        table.add_row("gamma", str(criterion.gamma))
    recovery = report.recovery
    if recovery is not None:
        table.add_row("strategy", recovery.strategy)
        table.add_row("fidelity", ", ".join(f"{f:.6f}" for f in recovery.fidelity))
        table.add_row("lambda defect", f"{recovery.lambda_defect_max:.3e}")
    for message in report.warnings:
        table.add_row("warning", message)
    table.add_row("exit code", str(report.exit_code))
    console.print(table)


def scenario_options(command: Callable) -> Callable:
    """Options shared by every subcommand; exceptions map to exit codes here."""

    @click.option("--config", "config_path", type=click.Path(), help="JSON/YAML config")
    @click.option("--scenario", help="Built-in scenario name")
    @click.option("--out", type=click.Path(), help="Output file, stdout by default")
    @click.option("--seed", type=int, help="Overrides the config seed")
    @click.option("--jobs", type=int, help="Sweep worker threads")
    @click.option(
        "--emit-config",
        "emit",
        metavar="NAME",
        help="Print the config of a built-in scenario and exit",
    )
    @wraps(command)
    def wrapper(config_path, scenario, out, seed, jobs, emit):
        try:
            if emit:
                _write(dump_config(get_scenario(emit)), out)
                return
            config = _resolve(config_path, scenario)
            code = command(config, out, seed, jobs)
        except NLQECError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            console.print(f"[red]{type(exc).__name__}[/red]: {exc}")
            sys.exit(exc.exit_code)
        sys.exit(code)

    return wrapper


@click.group()
@click.version_option(__version__, prog_name="nlqec")
@click.option(
    "--log",
    type=click.Choice(list(LOG_LEVELS), case_sensitive=False),
    help="Log level, overrides NLQEC_LOG",
)
def cli(log: str | None):
    """Nonlinear quantum error correction: criterion checks and recovery."""
    if log:
        set_level(log)


@cli.command()
@scenario_options
def check(config: ScenarioConfig, out: str | None, seed: int | None, jobs):
    """Check the factorization criterion; exit 0 exact, 2 approximate, 1 fail."""
    report = ScenarioRunner(config, seed).check()
    _write(report.model_dump_json(indent=2), out)
    _summary(report)
    return report.exit_code


@cli.command()
@scenario_options
def recover(config: ScenarioConfig, out: str | None, seed: int | None, jobs):
    """Build the recovery and simulate it on every sample."""
    report = ScenarioRunner(config, seed).recover()
    _write(report.model_dump_json(indent=2), out)
    _summary(report)
    return report.exit_code


@cli.command()
@scenario_options
def sweep(config: ScenarioConfig, out: str | None, seed: int | None, jobs):
    """Run the recovery over the config's sweep axes and write a CSV table."""
    table = run_sweep(config, jobs, seed)
    write_sweep(table, out or sys.stdout)
    console.print(f"Sweep [{config.name}] finished [points = {len(table)}]")
    return 0
