"""Job models.

A :class:`JobSpec` is the fully resolved description of one CLI invocation:
command, field source, variables, weighting and run options.
"""

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from pathlib import Path

from ..algebra.base import WeightlinError

__all__ = ["Command", "Method", "OutputFormat", "JobSpec", "InvalidJobError"]


class InvalidJobError(WeightlinError):
    """Raised when a job specification violates its invariants."""

    code = "INVALID_JOB"


class Command(StrEnum):
    """Commands a job can run."""

    ANALYZE = "analyze"
    LINEARIZE = "linearize"
    FLOW = "flow"
    EXP = "exp"
    BRACKET = "bracket"
    PULLBACK = "pullback"


class Method(StrEnum):
    """Linearization methods."""

    MOSER = "moser"
    EULER = "euler"
    ORACLE = "oracle"

    @classmethod
    def _missing_(cls, value: object) -> "Method | None":
        if value == "euler-like":
            return cls.EULER
        return None


class OutputFormat(StrEnum):
    """Report formats."""

    TEXT = "text"
    JSON = "json"


@dataclass
class JobSpec:
    """One resolved invocation."""

    command: Command
    variables: tuple[str, ...]
    weights: tuple[int, ...]
    order: int
    field_text: str | None = None
    field_file: Path | None = None
    # Second operand: the other field for bracket, the diffeomorphism for pullback
    operand_text: str | None = None
    t_cap: int | None = None
    at: Fraction | None = None
    method: Method = Method.MOSER
    output_format: OutputFormat = OutputFormat.TEXT
    out: Path | None = None
    threads: int = 1
    permute_weights: bool = False

    @property
    def json_output(self) -> bool:
        return self.output_format == OutputFormat.JSON

    def validate(self) -> None:
        """Check the job invariants.

        Raises:
            InvalidJobError: If variables repeat, the cutoff is below 1, the weighting
                length differs from the variable count or no field source is given.
        """
        if not self.variables:
            raise InvalidJobError("At least one variable is required")
        if len(set(self.variables)) != len(self.variables):
            raise InvalidJobError("Variables must be distinct", {"variables": list(self.variables)})
        if self.order < 1:
            raise InvalidJobError(f"Cutoff must be at least 1, got {self.order}", {"order": self.order})
        if len(self.weights) != len(self.variables):
            raise InvalidJobError(
                f"Weighting has {len(self.weights)} entries for {len(self.variables)} variables",
                {"weights": list(self.weights), "variables": list(self.variables)},
            )
        if self.field_text is None and self.field_file is None:
            raise InvalidJobError("No vector field given (inline or --file)")
        if self.threads < 1:
            raise InvalidJobError(f"Thread count must be positive, got {self.threads}")
        if self.t_cap is not None and self.t_cap < 0:
            raise InvalidJobError(f"t-cap must be non-negative, got {self.t_cap}")
        if self.command in (Command.BRACKET, Command.PULLBACK) and self.operand_text is None:
            raise InvalidJobError(f"Command '{self.command}' needs a second operand")
