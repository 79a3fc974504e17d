"""Field commands.

Low-level vector field operations: the Lie bracket of two fields and the
pullback of a field along a formal diffeomorphism.
"""

from typing import Annotated, Any

import typer
from rich.console import Console

from ..models.job import Command
from .common import (
    FieldArgument,
    FileOption,
    FormatOption,
    JsonOption,
    OrderOption,
    OutOption,
    PermuteOption,
    VarsOption,
    WeightsOption,
    build_job,
    execute_job,
    print_header,
)


def _render_bracket(report: dict[str, Any], target: Console) -> None:
    result = report["result"]
    print_header(report, target)
    target.print(f"[bold]X:[/bold] {result['left']['expression']}")
    target.print(f"[bold]Y:[/bold] {result['right']['expression']}")
    target.print(f"[bold][X, Y]:[/bold] [green]{result['bracket']['expression']}[/green]")


def _render_pullback(report: dict[str, Any], target: Console) -> None:
    result = report["result"]
    print_header(report, target)
    target.print(f"[bold]X:[/bold] {result['field']['expression']}")
    target.print(f"[bold]phi:[/bold] ({result['phi']['expression']})")
    target.print(f"[bold]phi^* X:[/bold] [green]{result['pullback']['expression']}[/green]")
    target.print(f"[dim]{result['convention']}[/dim]")


def bracket_command(
    field: FieldArgument = None,
    other: Annotated[str | None, typer.Option("--with", help="Second field Y of the bracket [X, Y].")] = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Lie bracket [X, Y] of two vector fields."""
    execute_job(
        lambda: build_job(
            Command.BRACKET,
            field,
            file,
            vars_,
            weights,
            order,
            output_format,
            json_output,
            out,
            permute_weights=permute_weights,
            operand=other,
        ),
        _render_bracket,
        Command.BRACKET,
        json_output or output_format == "json",
    )


def pullback_command(
    field: FieldArgument = None,
    phi: Annotated[
        str | None,
        typer.Option("--phi", help="Diffeomorphism components, comma separated, e.g. 'x + y^2, y'."),
    ] = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Pull a vector field back along a formal diffeomorphism."""
    execute_job(
        lambda: build_job(
            Command.PULLBACK,
            field,
            file,
            vars_,
            weights,
            order,
            output_format,
            json_output,
            out,
            permute_weights=permute_weights,
            operand=phi,
        ),
        _render_pullback,
        Command.PULLBACK,
        json_output or output_format == "json",
    )
