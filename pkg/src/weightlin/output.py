"""Output formatting and file handling utilities.

This module serializes algebra objects into the JSON report schema, maps errors
to exit codes and prints reports and errors consistently across all commands.
Every rational is emitted as a ``"p/q"`` string in lowest terms and every
multi-index as an integer array.
"""

import json
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.table import Table

from .algebra.base import (
    NonEvaluativeError,
    NotAdmissibleError,
    SingularAdjointError,
    WeightlinError,
)
from .algebra.flows import Isotopy, TimeVectorField
from .algebra.normal_form import DegreeCertificate
from .algebra.series import TruncatedSeries, format_rational
from .algebra.spectral import ResonanceReport
from .algebra.vectorfields import FormalDiffeo, VectorField
from .constants import (
    EXIT_INPUT,
    EXIT_NON_EVALUATIVE,
    EXIT_NOT_ADMISSIBLE,
    EXIT_SINGULAR,
    REPORT_VERSION,
)
from .expressions import format_field, format_series
from .logging import console, error_console

__all__ = [
    "rational_to_json",
    "series_to_json",
    "field_to_json",
    "diffeo_to_json",
    "time_field_to_json",
    "isotopy_to_json",
    "certificate_to_json",
    "resonances_to_json",
    "build_report",
    "exit_code_for",
    "output_json",
    "output_error_json",
    "write_report_file",
    "handle_error",
    "print_certificates",
]


def rational_to_json(value: int | Fraction) -> str:
    return format_rational(value)


def series_to_json(series: TruncatedSeries, names: Sequence[str]) -> dict[str, Any]:
    """``{"expression", "terms": [{"exponents", "coefficient"}]}`` in canonical order."""
    return {
        "expression": format_series(series, names),
        "terms": [
            {"exponents": list(alpha), "coefficient": rational_to_json(coefficient)}
            for alpha, coefficient in series.items()
        ],
    }


def field_to_json(field: VectorField, names: Sequence[str]) -> dict[str, Any]:
    return {
        "expression": format_field(field, names),
        "components": [series_to_json(component, names) for component in field.components],
    }


def diffeo_to_json(phi: FormalDiffeo, names: Sequence[str]) -> dict[str, Any]:
    return {
        "expression": ", ".join(format_series(component, names) for component in phi.components),
        "components": [series_to_json(component, names) for component in phi.components],
    }


def time_field_to_json(field: TimeVectorField, names: Sequence[str], offset: int = 0) -> list[dict[str, Any]]:
    """Nonzero ``t`` coefficients; ``offset`` shifts the reported index (``U[k+1]`` at ``t^k``)."""
    return [
        {"index": k + offset, "field": field_to_json(coefficient, names)}
        for k, coefficient in enumerate(field.coefficients)
        if not coefficient.is_zero
    ]


def isotopy_to_json(isotopy: Isotopy, names: Sequence[str]) -> dict[str, Any]:
    return {
        "t_cap": isotopy.t_cap,
        "exhausted": isotopy.exhausted,
        "coefficients": [
            {
                "t_power": k,
                "components": [series_to_json(component, names) for component in coefficient],
            }
            for k, coefficient in enumerate(isotopy.coefficients)
        ],
    }


def certificate_to_json(certificate: DegreeCertificate, names: Sequence[str]) -> dict[str, Any]:
    return {
        "degree": certificate.degree,
        "dimension": certificate.dimension,
        "invertible": certificate.invertible,
        "determinant": rational_to_json(certificate.determinant),
        "kernel": [field_to_json(field, names) for field in certificate.kernel],
    }


def _eigenvalue_to_json(value: Fraction | complex) -> str | dict[str, float]:
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return rational_to_json(value)


def resonances_to_json(report: ResonanceReport) -> dict[str, Any]:
    data: dict[str, Any] = {
        "exactness": report.exactness,
        "k_max": report.k_max,
        "eigenvalues": [_eigenvalue_to_json(value) for value in report.eigenvalues],
        "resonances": [
            {"axis": r.axis, "exponents": list(r.exponents), "degree": r.degree} for r in report.resonances
        ],
    }
    if report.tolerance is not None:
        data["tolerance"] = report.tolerance
    return data


def build_report(
    command: str,
    weights: Sequence[int],
    cutoff: int,
    result: dict[str, Any],
    certificates: Sequence[dict[str, Any]] = (),
    exactness: str = "exact",
) -> dict[str, Any]:
    """Standard report envelope."""
    return {
        "version": REPORT_VERSION,
        "command": command,
        "weighting": list(weights),
        "cutoff": cutoff,
        "result": result,
        "certificates": list(certificates),
        "exactness": exactness,
    }


def exit_code_for(error: Exception) -> int:
    """Exit code of a pipeline error.

    Every :class:`WeightlinError` that is not one of the three algebraic outcomes
    counts as an input error.
    """
    if isinstance(error, NotAdmissibleError):
        return EXIT_NOT_ADMISSIBLE
    if isinstance(error, SingularAdjointError):
        return EXIT_SINGULAR
    if isinstance(error, NonEvaluativeError):
        return EXIT_NON_EVALUATIVE
    return EXIT_INPUT


def output_json(data: dict[str, Any]) -> None:
    """Output a report as JSON to stdout."""
    console.print_json(json.dumps(data, default=str))


def output_error_json(
    code: str,
    message: str,
    details: dict | None = None,
    command: str | None = None,
) -> None:
    """Output an error as JSON to stdout."""
    envelope: dict[str, Any] = {
        "version": REPORT_VERSION,
        "command": command,
        "error": {
            "code": code,
            "message": message,
        },
    }
    if details:
        envelope["error"]["details"] = details
    console.print_json(json.dumps(envelope, default=str))


def write_report_file(path: Path, data: dict[str, Any]) -> Path:
    """Write a report to a JSON file.

    Args:
        path: Destination file; parent directories are created.
        data: Report to write.

    Returns:
        The written path.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=str) + "\n")
    return path


def handle_error(e: Exception, json_output: bool, command: str | None = None) -> int:
    """Report a pipeline error and return its exit code.

    Args:
        e: The exception that was raised.
        json_output: Whether to output in JSON format.
        command: Command name for the error envelope.
    """
    code = exit_code_for(e)
    if isinstance(e, WeightlinError):
        if json_output:
            output_error_json(code=e.code, message=e.message, details=e.details, command=command)
        elif isinstance(e, NotAdmissibleError):
            error_console.print(f"[red]Not admissible:[/red] {e.message}")
        elif isinstance(e, SingularAdjointError):
            error_console.print(f"[red]Singular adjoint:[/red] {e.message}")
            for index, direction in enumerate(e.kernel, start=1):
                terms = ", ".join(
                    f"{t['coefficient']} * x^{t['exponents']} d/dx{t['axis'] + 1}" for t in direction["terms"]
                )
                error_console.print(f"  [dim]kernel {index}:[/dim] {terms}")
        elif isinstance(e, NonEvaluativeError):
            error_console.print(f"[red]Not evaluative:[/red] {e.message}")
        else:
            error_console.print(f"[red]Error: {e.message}[/red]")
    elif json_output:
        output_error_json(code="INVALID_INPUT", message=str(e), command=command)
    else:
        error_console.print(f"[red]Error: {e}[/red]")
    return code


def print_certificates(
    certificates: Sequence[dict[str, Any]],
    title: str = "Adjoint certificates",
    target: Console | None = None,
) -> None:
    """Per-degree certificate table."""
    if not certificates:
        return
    table = Table(title=title)
    table.add_column("Degree", style="cyan", justify="right")
    table.add_column("Dimension", justify="right")
    table.add_column("Invertible")
    table.add_column("Determinant", style="blue")
    for certificate in certificates:
        table.add_row(
            str(certificate["degree"]),
            str(certificate["dimension"]),
            "[green]yes[/green]" if certificate["invertible"] else "[red]no[/red]",
            _short_rational(certificate["determinant"]),
        )
    (target or console).print(table)


def _short_rational(text: str) -> str:
    numerator, _, denominator = text.partition("/")
    shown = numerator if denominator == "1" else text
    return shown if len(shown) <= 40 else f"{shown[:18]}...{shown[-18:]}"
