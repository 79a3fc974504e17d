"""Flow commands.

``flow`` integrates a time-dependent field into an isotopy; ``exp`` does the same
for an autonomous field. Both can evaluate the result at a rational time.
"""

from typing import Any

from rich.console import Console
from rich.table import Table

from ..models.job import Command
from .common import (
    AtOption,
    FieldArgument,
    FileOption,
    FormatOption,
    JsonOption,
    OrderOption,
    OutOption,
    PermuteOption,
    TCapOption,
    VarsOption,
    WeightsOption,
    build_job,
    execute_job,
    print_header,
)


def _render(report: dict[str, Any], target: Console) -> None:
    result = report["result"]
    names = result["variables"]
    isotopy = result["isotopy"]
    print_header(report, target)
    if "order_condition" in result and not result["order_condition"]:
        target.print("[yellow]Field does not satisfy the flow order condition; evaluation is not exact[/yellow]")
    status = "exhausted" if isotopy["exhausted"] else "truncated"
    target.print(f"[bold]t-cap:[/bold] {isotopy['t_cap']} ({status})")

    table = Table(title="Isotopy coefficients", show_header=True, header_style="bold")
    table.add_column("t^k", style="cyan", justify="right")
    for name in names:
        table.add_column(name, style="green")
    for entry in isotopy["coefficients"]:
        table.add_row(str(entry["t_power"]), *(c["expression"] for c in entry["components"]))
    target.print(table)

    if "evaluated" in result:
        target.print(f"[bold]At t = {result['at']}:[/bold]")
        for name, component in zip(names, result["evaluated"]["components"], strict=True):
            target.print(f"  {name} -> {component['expression']}")


def flow_command(
    field: FieldArgument = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    t_cap: TCapOption = None,
    at: AtOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Integrate a time-dependent vector field (use t for time)."""
    execute_job(
        lambda: build_job(
            Command.FLOW,
            field,
            file,
            vars_,
            weights,
            order,
            output_format,
            json_output,
            out,
            permute_weights=permute_weights,
            t_cap=t_cap,
            at=at,
        ),
        _render,
        Command.FLOW,
        json_output or output_format == "json",
    )


def exp_command(
    field: FieldArgument = None,
    file: FileOption = None,
    vars_: VarsOption = None,
    weights: WeightsOption = None,
    order: OrderOption = None,
    t_cap: TCapOption = None,
    at: AtOption = None,
    permute_weights: PermuteOption = False,
    output_format: FormatOption = None,
    out: OutOption = None,
    json_output: JsonOption = False,
) -> None:
    """Exponentiate an autonomous vector field."""
    execute_job(
        lambda: build_job(
            Command.EXP,
            field,
            file,
            vars_,
            weights,
            order,
            output_format,
            json_output,
            out,
            permute_weights=permute_weights,
            t_cap=t_cap,
            at=at,
        ),
        _render,
        Command.EXP,
        json_output or output_format == "json",
    )
