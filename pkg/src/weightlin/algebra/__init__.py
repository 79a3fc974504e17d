"""Exact formal algebra over the rationals.

Truncated power series, polynomial vector fields and their flows, weightings and
graded slices, the weighted linearization pipelines and the spectral checks.
Everything is immutable and exact; nothing here does I/O.
"""

from .base import (
    NonEvaluativeError,
    NotAdmissibleError,
    SingularAdjointError,
    WeightlinError,
)
from .flows import Isotopy, TimeVectorField, evaluate_isotopy, exponential_flow, flow
from .normal_form import (
    DegreeCertificate,
    LinearizationResult,
    adjoint_matrix,
    euler_like_linearize,
    iterative_linearize_oracle,
    linearize,
    moser_linearize,
    verify_linearization,
)
from .series import SeriesContext, TruncatedSeries, Weighting
from .spectral import (
    LinearPart,
    compatible_ordering,
    enumerate_resonances,
    is_hyperbolic,
    weighted_linear_part,
)
from .vectorfields import FormalDiffeo, VectorField, compose_diffeo, invert_diffeo, lie_bracket, pullback_vf
from .weighting import is_admissible, slice_basis, weighted_linear_approximation

__all__ = [
    # Errors
    "WeightlinError",
    "NotAdmissibleError",
    "SingularAdjointError",
    "NonEvaluativeError",
    # Series
    "Weighting",
    "SeriesContext",
    "TruncatedSeries",
    # Vector fields
    "VectorField",
    "FormalDiffeo",
    "lie_bracket",
    "compose_diffeo",
    "invert_diffeo",
    "pullback_vf",
    # Flows
    "TimeVectorField",
    "Isotopy",
    "exponential_flow",
    "flow",
    "evaluate_isotopy",
    # Weighting
    "is_admissible",
    "slice_basis",
    "weighted_linear_approximation",
    # Normal form
    "DegreeCertificate",
    "LinearizationResult",
    "adjoint_matrix",
    "linearize",
    "moser_linearize",
    "euler_like_linearize",
    "iterative_linearize_oracle",
    "verify_linearization",
    # Spectral
    "LinearPart",
    "weighted_linear_part",
    "compatible_ordering",
    "enumerate_resonances",
    "is_hyperbolic",
]
