"""
Terminal rendering of run reports with rich tables and panels.
"""
from typing import Any, Dict, List

from rich.align import Align
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from core.models import RunReport


def _sign_style(sign: int) -> str:
    return "green" if sign > 0 else "red"


def render_group(console: Console, report: RunReport) -> None:
    results = report.results
    table = Table(title=f"Stabilizer group of {report.graph.name}", header_style="bold magenta")
    table.add_column("#", justify="right", style="dim")
    table.add_column("Element", style="cyan")
    table.add_column("Generators", style="white")
    for index, element in enumerate(results["elements"]):
        label = Text(element["label"], style=_sign_style(element["sign"]))
        generators = " ".join(f"S{a}" for a in element["generators"]) or "-"
        table.add_row(str(index), label, generators)
    console.print(table)
    histogram = results["sign_histogram"]
    console.print(Panel(f"[bold]{results['size']}[/bold] elements: "
                        f"[green]{histogram['+1']} with sign +1[/green], [red]{histogram['-1']} with sign -1[/red]",
                        border_style="dim"))


def render_paradox(console: Console, report: RunReport) -> None:
    results = report.results
    if not results["arguments"]:
        console.print(f"[yellow]No GHZ argument on {report.graph.name} "
                      f"up to {results['max_subset_size']} elements.[/yellow]")
        return
    table = Table(title=f"GHZ arguments on {report.graph.name}", header_style="bold magenta")
    table.add_column("Elements", style="cyan")
    table.add_column("Window", style="white")
    table.add_column("Cooperating", style="white")
    table.add_column("Max satisfied", justify="right")
    for argument in results["arguments"]:
        table.add_row(
            ", ".join(argument["elements"]),
            _sites(argument["window"]),
            _sites(argument["cooperating_sites"]) or "-",
            f"{argument['max_satisfied']}/{len(argument['elements'])}",
        )
    console.print(table)
    console.print(f"[bold green]{results['count']} arguments[/bold green] "
                  f"in {len(results['windows'])} distinct windows")


def _sites(sites: List[int]) -> str:
    return " ".join(str(s) for s in sites)


def _bound_table(title: str, bound: Dict[str, Any]) -> Table:
    table = Table(title=title, header_style="bold magenta", show_header=True)
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_column("Certified", justify="center")
    table.add_row("classical bound", f"{bound['classical_bound']:.6f}", "yes" if bound["classical_certified"] else "no")
    table.add_row("quantum value", f"{bound['quantum_value']:.6f}", "yes" if bound["quantum_certified"] else "no")
    table.add_row("algebraic bound", f"{bound['algebraic_bound']:.6f}", "")
    verdict = "[bold red]violated[/bold red]" if bound["violation"] else "[green]not violated[/green]"
    table.add_row("inequality", verdict, "")
    return table


def _settings_table(settings: Dict[str, Dict[str, Any]]) -> Table:
    table = Table(title="Settings", header_style="bold magenta")
    table.add_column("Party", justify="right")
    table.add_column("Label", style="cyan")
    table.add_column("Bloch vector")
    for party, labels in settings["settings"].items():
        for label, bloch in labels.items():
            vector = "identity" if bloch is None else "(" + ", ".join(f"{v:+.4f}" for v in bloch) + ")"
            table.add_row(str(party), label, vector)
    return table


def render_bounds(console: Console, report: RunReport) -> None:
    invocation = report.invocation
    optimized = report.results["optimized"]
    console.print(_bound_table(f"{invocation['ineq']} on {invocation['state']} (optimized)", optimized))
    if optimized.get("settings"):
        console.print(_settings_table(optimized["settings"]))
    reference = report.results.get("reference")
    if reference is not None:
        console.print(_bound_table(f"{invocation['ineq']} on {invocation['state']} (reference settings)", reference))


def render_checks(console: Console, report: RunReport) -> None:
    table = Table(title="Reproduction checks", header_style="bold magenta", expand=True)
    table.add_column("Check", style="cyan")
    table.add_column("Expected", style="white")
    table.add_column("Computed", style="white")
    table.add_column("", justify="center", width=6)
    for check in report.results["checks"]:
        status = "[green]PASS[/green]" if check["passed"] else "[bold red]FAIL[/bold red]"
        table.add_row(check["name"], check["expected"], check["computed"], status)
    console.print(table)
    results = report.results
    style = "green" if not results["failed"] else "red"
    console.print(Panel(f"[{style}]{results['passed']} passed, {results['failed']} failed[/{style}]",
                        border_style=style))


_RENDERERS = {
    "group": render_group,
    "paradox": render_paradox,
    "bounds": render_bounds,
    "report-paper": render_checks,
}


def render_report(console: Console, report: RunReport) -> None:
    _RENDERERS[report.command](console, report)
    if report.timing:
        console.print(f"[dim]{report.command} finished in {report.timing.get('total', 0.0):.2f}s "
                      f"(v{report.version})[/dim]")


def render_workflow(console: Console, version: str) -> None:
    """Header, workflow panel and command table."""
    title = Text.assemble(("Cluster-state nonlocality ", "bold cyan"), (f"v{version}", "dim white"))
    console.print("\n", Align.center(title))
    steps = [
        "[bold yellow]1. Inspect:[/bold yellow]   [green]group[/green] --graph 1d:4 (stabilizer elements and signs)",
        "[bold yellow]2. Search:[/bold yellow]    [green]paradox[/green] --graph 1d:8 (GHZ arguments, windows)",
        "[bold yellow]3. Quantify:[/bold yellow]  [green]bounds[/green] --ineq cluster4 --state w4 (classical vs quantum)",
        "[bold yellow]4. Reproduce:[/bold yellow] [green]report-paper[/green] (every check, exit 1 on failure)",
    ]
    console.print(Panel("\n".join(steps), title="[bold white]Workflow[/bold white]",
                        border_style="bright_blue", padding=(1, 2)))
    table = Table(show_header=True, header_style="bold magenta", box=None, expand=True)
    table.add_column("Category", style="cyan", width=15)
    table.add_column("Commands", style="white")
    table.add_row("Stabilizers", "group, paradox")
    table.add_row("Inequalities", "bounds, report-paper")
    table.add_row("Export", "amplitudes, export-graph")
    console.print(table)
