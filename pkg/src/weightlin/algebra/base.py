"""Exception hierarchy for the algebra layer.

Every error carries a stable ``code`` string and a ``details`` dict so that the
output layer can render it as text or as a JSON error envelope.
"""

from __future__ import annotations

from typing import Any

__all__ = [
    "WeightlinError",
    "ContextMismatchError",
    "AxisError",
    "WeightingError",
    "NotAdmissibleError",
    "SingularAdjointError",
    "NonEvaluativeError",
    "NotDiffeomorphismError",
    "NotEulerLikeError",
    "SliceLeakageError",
    "FlowOrderError",
    "SpectralError",
    "NonzeroConstantTermError",
    "NotInvertibleError",
]


class WeightlinError(Exception):
    """Base class for all errors raised by weightlin."""

    code = "ERROR"

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ContextMismatchError(WeightlinError):
    """Raised when operands live in different series contexts."""

    code = "CONTEXT_MISMATCH"


class AxisError(WeightlinError):
    """Raised when an axis index or multi-index length is out of range."""

    code = "AXIS_ERROR"


class WeightingError(WeightlinError):
    """Raised when weights are not positive and non-decreasing."""

    code = "INVALID_WEIGHTING"


class NotAdmissibleError(WeightlinError):
    """Raised when a vector field has a slice of negative weighted degree."""

    code = "NOT_ADMISSIBLE"

    def __init__(self, axis: int, exponents: tuple[int, ...], degree: int):
        super().__init__(
            f"Field is not admissible: term x^{list(exponents)} d/dx{axis + 1} has degree {degree}",
            {"axis": axis, "exponents": list(exponents), "degree": degree},
        )
        self.axis = axis
        self.exponents = exponents
        self.degree = degree


class SingularAdjointError(WeightlinError):
    """Raised when ad_{X[0]} is not invertible on some graded slice."""

    code = "SINGULAR_ADJOINT"

    def __init__(self, degree: int, kernel: list[dict[str, Any]]):
        super().__init__(
            f"Adjoint operator is singular at degree {degree} (kernel dimension {len(kernel)})",
            {"degree": degree, "kernel": kernel},
        )
        self.degree = degree
        self.kernel = kernel


class NonEvaluativeError(WeightlinError):
    """Raised when an isotopy cannot be evaluated at a nonzero time."""

    code = "NON_EVALUATIVE"


class NotDiffeomorphismError(WeightlinError):
    """Raised when a tuple is not a formal diffeomorphism."""

    code = "NOT_DIFFEOMORPHISM"


class NotEulerLikeError(WeightlinError):
    """Raised when the Euler-like fast path is requested for a non Euler-like field."""

    code = "NOT_EULER_LIKE"


class SliceLeakageError(WeightlinError):
    """Raised when a field expected in a graded slice has terms outside of it."""

    code = "SLICE_LEAKAGE"


class FlowOrderError(WeightlinError):
    """Raised when flow coefficients violate the weighted order bound."""

    code = "FLOW_ORDER"


class SpectralError(WeightlinError):
    """Raised when a spectral computation is called outside its domain."""

    code = "SPECTRAL_ERROR"


class NonzeroConstantTermError(WeightlinError):
    """Raised when a substitution tuple has a component outside the maximal ideal."""

    code = "NONZERO_CONSTANT_TERM"


class NotInvertibleError(WeightlinError):
    """Raised when a series or matrix that must be inverted is not a unit."""

    code = "NOT_INVERTIBLE"
