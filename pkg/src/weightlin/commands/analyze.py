"""Analyze command.

Reports admissibility, the graded decomposition, per-degree adjoint certificates
and the spectral picture (ordering, resonances, hyperbolicity) of a field.
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


def _print_slices(slices: list[dict[str, Any]], target: Console) -> None:
    table = Table(title="Graded decomposition", show_header=True, header_style="bold")
    table.add_column("Degree", style="cyan", justify="right")
    table.add_column("Slice", style="green")
    for entry in slices:
        table.add_row(str(entry["degree"]), entry["field"]["expression"])
    target.print(table)


def _print_spectrum(result: dict[str, Any], target: Console) -> None:
    target.print("[bold]Weighted linear part[/bold] (transpose of DX(0))")
    for row in result["linear_part"]:
        target.print("  [" + "  ".join(f"{entry:>6}" for entry in row) + " ]")
    target.print(f"[bold]Characteristic polynomial:[/bold] {result['char_poly']}")
    target.print(f"[bold]Spectrum invariant:[/bold] {'yes' if result['spectrum_invariant'] else 'no'}")
    if result["ordering"] is not None:
        target.print(f"[bold]Eigenvalue ordering:[/bold] ({', '.join(result['ordering'])})")
    else:
        target.print("[yellow]No rational eigenvalue ordering; resonances are heuristic[/yellow]")
        for block, factor in result["irrational_factors"].items():
            target.print(f"  [dim]block {block}:[/dim] {factor}")

    resonances = result["resonances"]
    if resonances["resonances"]:
        table = Table(title=f"Resonances through degree {resonances['k_max']}", header_style="bold")
        table.add_column("Degree", style="cyan", justify="right")
        table.add_column("Axis", justify="right")
        table.add_column("Exponents", style="blue")
        for r in resonances["resonances"]:
            table.add_row(str(r["degree"]), str(r["axis"] + 1), str(tuple(r["exponents"])))
        target.print(table)
    else:
        target.print(f"[green]Non-resonant through degree {resonances['k_max']}[/green]")

    target.print(f"[bold]Hyperbolic:[/bold] {'yes' if result['hyperbolic'] else 'no'}")
    if result.get("hyperbolicity_consistent") is False:
        target.print("[red]Non-resonance without hyperbolicity detected[/red]")


def _render(report: dict[str, Any], target: Console) -> None:
    result = report["result"]
    print_header(report, target)
    target.print(f"[bold]Field:[/bold] {result['field']['expression']}")
    if result["admissible"]:
        target.print("[green]Admissible[/green]")
    else:
        witness = result["witness"]
        target.print(
            f"[red]Not admissible[/red]: component {witness['axis'] + 1} has monomial "
            f"{tuple(witness['exponents'])} of weighted degree {witness['degree']}"
        )
    if result["euler_like"]:
        target.print("[cyan]Weighted Euler-like[/cyan]")
    target.print()
    _print_slices(result["slices"], target)
    print_certificates(report["certificates"], target=target)
    target.print()
    _print_spectrum(result, target)


def analyze_command(
    field: FieldArgument = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    threads: ThreadsOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Analyze admissibility, certificates and spectrum of a vector field."""
    execute_job(
        lambda: build_job(
            Command.ANALYZE,
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
        ),
        _render,
        Command.ANALYZE,
        json_output or output_format == "json",
    )
