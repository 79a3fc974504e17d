"""Linearize command.

Computes a formal diffeomorphism carrying a field to its weighted linear
approximation, along with the certificates that justify it.
"""

from typing import Any

from rich.console import Console
from rich.table import Table

from ..models.job import Command
from ..output import print_certificates
from .common import (
    FieldArgument,
    FileOption,
    FormatOption,
    JsonOption,
    MethodOption,
    OrderOption,
    OutOption,
    PermuteOption,
    ThreadsOption,
    VarsOption,
    WeightsOption,
    build_job,
    execute_job,
    print_header,
)


def _print_components(title: str, diffeo: dict[str, Any], names: list[str], target: Console) -> None:
    table = Table(title=title, show_header=True, header_style="bold")
    table.add_column("Coordinate", style="cyan")
    table.add_column("Series", style="green")
    for name, component in zip(names, diffeo["components"], strict=True):
        table.add_row(name, component["expression"])
    target.print(table)


def _render(report: dict[str, Any], target: Console) -> None:
    result = report["result"]
    names = result["variables"]
    print_header(report, target)
    target.print(f"[bold]Method:[/bold] {result['method']}")
    target.print(f"[bold]Linear model:[/bold] {result['linear_part']['expression']}")
    target.print(f"[dim]{result['convention']}[/dim]")
    _print_components("New coordinates (phi inverse)", result["phi_inverse"], names, target)
    _print_components("Diffeomorphism phi", result["phi"], names, target)
    if result["generator"]:
        table = Table(title="Generator slices", header_style="bold")
        table.add_column("Index", style="cyan", justify="right")
        table.add_column("U", style="blue")
        for entry in result["generator"]:
            table.add_row(str(entry["index"]), entry["field"]["expression"])
        target.print(table)
    print_certificates(report["certificates"], target=target)
    if result["verified"]:
        target.print("[green]Verified: pullback equals the linear model through the cutoff[/green]")
    else:
        target.print(f"[red]Residual:[/red] {result['residual']['expression']}")


def linearize_command(
    field: FieldArgument = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    method: MethodOption = None,
    threads: ThreadsOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Linearize a vector field up to its weighted-degree cutoff."""
    execute_job(
        lambda: build_job(
            Command.LINEARIZE,
            field,
            file,
            vars_,
            weights,
            order,
            output_format,
            json_output,
            out,
            threads=threads,
            permute_weights=permute_weights,
            method=method,
        ),
        _render,
        Command.LINEARIZE,
        json_output or output_format == "json",
    )
