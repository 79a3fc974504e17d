"""Shared options and job plumbing for the computation commands."""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Any

import typer
from rich.console import Console

from ..algebra.base import WeightlinError
from ..context import get_context
from ..logging import console, error_console
from ..models.job import Command, JobSpec, Method, OutputFormat
from ..output import handle_error, output_json, write_report_file
from ..runner import run
from ..utils import parse_fraction, parse_int_list, parse_names

__all__ = [
    "FieldArgument",
    "FileOption",
    "VarsOption",
    "WeightsOption",
    "OrderOption",
    "FormatOption",
    "JsonOption",
    "OutOption",
    "ThreadsOption",
    "PermuteOption",
    "TCapOption",
    "AtOption",
    "MethodOption",
    "build_job",
    "execute_job",
    "print_header",
]

FieldArgument = Annotated[
    str | None,
    typer.Argument(help="Vector field, e.g. 'x*d/dx + (2*y + x^2)*d/dy'."),
]
FileOption = Annotated[
    Path | None,
    typer.Option("--file", "-i", help="Read the field from a text file or a JSON document.", dir_okay=False),
]
VarsOption = Annotated[
    str | None,
    typer.Option("--vars", help="Comma-separated variable names, e.g. 'x,y,z'."),
]
WeightsOption = Annotated[
    str | None,
    typer.Option("--weights", "-w", help="Comma-separated positive integer weights (default: all 1)."),
]
OrderOption = Annotated[
    int | None,
    typer.Option("--order", "-N", help="Weighted-degree cutoff N."),
]
FormatOption = Annotated[
    str | None,
    typer.Option("--format", "-f", help="Output format: text or json."),
]
JsonOption = Annotated[
    bool,
    typer.Option("--json", help="Output as JSON (same as --format json)."),
]
OutOption = Annotated[
    Path | None,
    typer.Option("--out", "-o", help="Write the report to this file instead of stdout."),
]
ThreadsOption = Annotated[
    int | None,
    typer.Option("--threads", help="Worker threads for per-degree certificates."),
]
PermuteOption = Annotated[
    bool,
    typer.Option("--permute-weights", help="Sort a non-monotone weighting, relabelling the variables."),
]
TCapOption = Annotated[
    int | None,
    typer.Option("--t-cap", help="Highest power of t kept in the flow."),
]
AtOption = Annotated[
    str | None,
    typer.Option("--at", help="Evaluate the flow at this rational time, e.g. 1 or 1/2."),
]
MethodOption = Annotated[
    str | None,
    typer.Option("--method", "-m", help="Linearization method: moser, euler (euler-like) or oracle."),
]


def _document_header(path: Path | None) -> dict[str, Any]:
    """``variables`` and ``weighting`` of a JSON field document, if any."""
    if path is None or path.suffix.lower() != ".json" or not path.is_file():
        return {}
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        # The runner reports the decode error with the right exit code.
        return {}
    return document if isinstance(document, dict) else {}


def build_job(
    command: Command,
    field: str | None,
    file: Path | None,
    vars_: str | None,
    weights: str | None,
    order: int | None,
    output_format: str | None,
    json_output: bool,
    out: Path | None,
    threads: int | None = None,
    permute_weights: bool = False,
    operand: str | None = None,
    t_cap: int | None = None,
    at: str | None = None,
    method: str | None = None,
) -> JobSpec:
    """Resolve command-line options against the active settings.

    A flag beats the environment, which beats the profile, which beats the
    built-in default. Variables and weights may also come from a JSON field
    document.

    Raises:
        ValueError: If an option value cannot be parsed.
    """
    settings = get_context().settings
    header = _document_header(file)
    if vars_ is not None:
        variables = parse_names(vars_)
    elif header.get("variables"):
        variables = tuple(str(name) for name in header["variables"])
    else:
        raise ValueError("Variables are required (--vars or a JSON document with 'variables')")
    if weights is not None:
        weighting = parse_int_list(weights)
    elif header.get("weighting"):
        weighting = tuple(int(w) for w in header["weighting"])
    else:
        weighting = (1,) * len(variables)
    if json_output:
        resolved_format = OutputFormat.JSON
    else:
        resolved_format = OutputFormat(output_format or settings.format)
    return JobSpec(
        command=command,
        variables=variables,
        weights=weighting,
        order=order if order is not None else settings.order,
        field_text=field,
        field_file=file,
        operand_text=operand,
        t_cap=t_cap if t_cap is not None else settings.t_cap,
        at=parse_fraction(at) if at is not None else None,
        method=Method(method or settings.method),
        output_format=resolved_format,
        out=out,
        threads=threads if threads is not None else settings.threads,
        permute_weights=permute_weights,
    )


def execute_job(
    make_job: Callable[[], JobSpec],
    render: Callable[[dict[str, Any], Console], None],
    command: Command,
    json_requested: bool,
) -> None:
    """Build and run a job, then render or write its report.

    Exits with the job's exit code when it is not zero.
    """
    try:
        job = make_job()
    except (ValueError, WeightlinError) as e:
        raise typer.Exit(handle_error(e, json_requested, str(command))) from None

    outcome = run(job)
    if outcome.error is not None:
        raise typer.Exit(handle_error(outcome.error, job.json_output, str(command))) from None

    assert outcome.report is not None
    if job.out is not None:
        if job.json_output:
            write_report_file(job.out, outcome.report)
        else:
            job.out.parent.mkdir(parents=True, exist_ok=True)
            with job.out.open("w", encoding="utf-8") as handle:
                render(outcome.report, Console(file=handle, width=120, no_color=True))
        error_console.print(f"[green]Report written to {job.out}[/green]")
    elif job.json_output:
        output_json(outcome.report)
    else:
        render(outcome.report, console)

    if not outcome.ok:
        if not job.json_output:
            error_console.print("[red]Result did not pass verification[/red]")
        raise typer.Exit(outcome.exit_code)


def print_header(report: dict[str, Any], target: Console) -> None:
    """Command, weighting, cutoff and any variable permutation."""
    result = report["result"]
    weighting = ", ".join(str(w) for w in report["weighting"])
    target.print(f"[bold]{report['command']}[/bold]  weights ({weighting})  cutoff N = {report['cutoff']}")
    if "permutation" in result:
        target.print(f"[yellow]Variables permuted to: {', '.join(result['variables'])}[/yellow]")
