#!/usr/bin/env python3
"""
CLI tool for cluster-state nonlocality runs.
"""
import logging
from contextlib import nullcontext
from typing import Callable, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from core import __version__
from core.errors import (ClusterNonlocalityError, GroupTooLargeError, SearchSpaceError, StateConstructionError,
                         StateTooLargeError)
from core.lattice import parse_graph_spec
from core.models import RunReport, RunSettings
from core.quantum import StateVector, dump_amplitudes
from core.report import DEFAULT_GRAPH, build_state, cmd_bounds, cmd_group, cmd_paradox, cmd_report_paper
from core.utils import load_settings, write_text
from visual import export_graph, render_report, render_workflow

app = typer.Typer(help="Cluster-state nonlocality toolkit")
console = Console()
logger = logging.getLogger(__name__)

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

_RESOURCE_ERRORS = (GroupTooLargeError, StateTooLargeError, SearchSpaceError)


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _settings(**overrides) -> RunSettings:
    try:
        return load_settings(**overrides)
    except ValidationError as e:
        console.print(f"[red]Invalid settings: {e}[/red]")
        raise typer.Exit(EXIT_USAGE)


def _build(build: Callable[[], RunReport]) -> RunReport:
    """Build a report, mapping library errors to exit codes."""
    try:
        return build()
    except _RESOURCE_ERRORS as e:
        console.print(f"[red]Resource limit: {e}[/red]")
        raise typer.Exit(EXIT_RESOURCE)
    except StateConstructionError as e:
        console.print(f"[red]State construction failed: {e}[/red]")
        raise typer.Exit(EXIT_CHECK_FAILED)
    except (ClusterNonlocalityError, ValidationError) as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(EXIT_USAGE)


def _emit(report: RunReport, as_json: bool, output: Optional[str]) -> None:
    """Print or save a report; exit 1 when one of its checks failed."""
    if output:
        path = write_text(output, report.to_json() + "\n")
        console.print(f"[green]Report saved to {path}[/green]")
    if as_json:
        typer.echo(report.to_json())
    elif not output:
        render_report(console, report)
    if not report.passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress at INFO level")):
    """Main callback: configure logging once for every command."""
    level = "INFO" if verbose else _settings().log_level
    _configure_logging(level)


@app.command()
def group(
    graph: str = typer.Option(DEFAULT_GRAPH, "--graph", help="Graph spec (1d:N, AxB, star:K, ring:N) or graph file"),
    as_json: bool = typer.Option(False, "--json", help="Print the machine-readable report"),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON report to this file"),
):
    """
    List every stabilizer element with its sign.
    """
    settings = _settings()
    _emit(_build(lambda: cmd_group(graph, settings)), as_json, output)


@app.command()
def paradox(
    graph: str = typer.Option(DEFAULT_GRAPH, "--graph", help="Graph spec or graph file"),
    max_size: Optional[int] = typer.Option(None, "--max-size", help="Largest subset size (default from settings)"),
    exclude: Optional[List[int]] = typer.Option(None, "--exclude", help="Site an element may not act on (repeatable)"),
    progress: bool = typer.Option(False, "--progress", help="Show a progress bar"),
    as_json: bool = typer.Option(False, "--json", help="Print the machine-readable report"),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON report to this file"),
):
    """
    Search GHZ arguments among the stabilizer elements, each verified by exhaustive LHV search.
    """
    settings = _settings()
    report = _build(lambda: cmd_paradox(graph, settings, max_size, exclude or (), show_progress=progress))
    _emit(report, as_json, output)


@app.command()
def bounds(
    ineq: str = typer.Option("cluster4", "--ineq", help="cluster4, window5, mabk4, stabsum, mermin3, symmetric-cluster4"),
    state: str = typer.Option("cluster", "--state", help="cluster, ghz, w4, w or reduced-window(N,k)"),
    graph: str = typer.Option(DEFAULT_GRAPH, "--graph", help="Graph for cluster/ghz states and stabsum"),
    restarts: Optional[int] = typer.Option(None, "--restarts", help="Optimizer restarts"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    progress: bool = typer.Option(False, "--progress", help="Show a progress bar"),
    as_json: bool = typer.Option(False, "--json", help="Print the machine-readable report"),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON report to this file"),
):
    """
    Classical bound, optimized quantum value and algebraic bound of an inequality on a state.
    """
    settings = _settings(restarts=restarts, seed=seed)
    report = _build(lambda: cmd_bounds(ineq, state, settings, graph, show_progress=progress))
    _emit(report, as_json, output)


@app.command("report-paper")
def report_paper(
    debug_perturb: bool = typer.Option(False, "--debug-perturb", help="Perturb cluster states (negative control)"),
    restarts: Optional[int] = typer.Option(None, "--restarts", help="Optimizer restarts"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    as_json: bool = typer.Option(False, "--json", help="Print the machine-readable report"),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON report to this file"),
):
    """
    Run every reproduction check; exit code 1 when any fails.
    """
    settings = _settings(restarts=restarts, seed=seed)
    status = nullcontext() if as_json else console.status("[cyan]Running reproduction checks...[/cyan]")
    with status:
        report = _build(lambda: cmd_report_paper(settings, debug_perturb))
    _emit(report, as_json, output)


@app.command()
def amplitudes(
    state: str = typer.Option("cluster", "--state", help="cluster, ghz, w4 or w"),
    graph: str = typer.Option(DEFAULT_GRAPH, "--graph", help="Graph spec or graph file"),
    output: Optional[str] = typer.Option(None, "--output", help="Write the dump to this file"),
):
    """
    Dump the amplitudes of a pure state, one 'bitstring real imag' line per basis state.
    """
    try:
        built = build_state(state, parse_graph_spec(graph))
    except _RESOURCE_ERRORS as e:
        console.print(f"[red]Resource limit: {e}[/red]")
        raise typer.Exit(EXIT_RESOURCE)
    except ClusterNonlocalityError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(EXIT_USAGE)
    if not isinstance(built, StateVector):
        console.print(f"[red]Error: {state} is a mixed state; only pure states have amplitudes[/red]")
        raise typer.Exit(EXIT_USAGE)
    text = dump_amplitudes(built)
    if output:
        path = write_text(output, text)
        console.print(f"[green]Amplitudes saved to {path}[/green]")
    else:
        typer.echo(text, nl=False)


@app.command("export-graph")
def export_graph_command(
    graph: str = typer.Option(DEFAULT_GRAPH, "--graph", help="Graph spec or graph file"),
    output: str = typer.Option(..., "--output", help="Destination file"),
    fmt: str = typer.Option("json", "--format", help="json (node-link) or text (graph file)"),
):
    """
    Export a graph as node-link JSON or in the plain graph-file format.
    """
    try:
        path = export_graph(parse_graph_spec(graph), output, fmt)
    except ClusterNonlocalityError as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(EXIT_USAGE)
    console.print(f"[green]Graph exported to {path}[/green]")


@app.command()
def workflow():
    """Show the workflow overview and the command list."""
    render_workflow(console, __version__)


if __name__ == "__main__":
    app()
