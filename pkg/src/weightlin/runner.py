"""Job execution.

:func:`run` turns a :class:`~weightlin.models.JobSpec` into an exit code and a
JSON-ready report. Nothing here prints; the commands render the outcome.
"""

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from .algebra.base import WeightlinError
from .algebra.flows import (
    Isotopy,
    evaluate_isotopy,
    exponential_flow,
    flow,
    satisfies_flow_order_condition,
)
from .algebra.normal_form import certify_degrees, linearize
from .algebra.series import SeriesContext, Weighting
from .algebra.spectral import (
    EXACT,
    HEURISTIC,
    Unsupported,
    char_poly,
    compatible_ordering,
    enumerate_resonances,
    enumerate_resonances_heuristic,
    is_hyperbolic,
    nonresonance_implies_hyperbolic_check,
    spectrum_is_invariant,
    weighted_linear_part,
)
from .algebra.vectorfields import FormalDiffeo, VectorField, pullback_vf
from .algebra.weighting import (
    graded_decomposition,
    is_admissible,
    is_weighted_euler_like,
    weighted_linear_approximation,
)
from .constants import CONVENTION_NOTE, EXIT_OK, EXIT_UNEXPECTED
from .expressions import DocumentError, field_from_json, parse_field, parse_time_field, parse_tuple
from .logging import get_logger, log_step
from .models.job import Command, InvalidJobError, JobSpec
from .output import (
    build_report,
    certificate_to_json,
    diffeo_to_json,
    exit_code_for,
    field_to_json,
    isotopy_to_json,
    rational_to_json,
    resonances_to_json,
    time_field_to_json,
)

__all__ = ["JobOutcome", "Workspace", "prepare", "execute", "run", "read_document"]

logger = get_logger(__name__)


@dataclass
class JobOutcome:
    """Exit code and report (or error) of one job."""

    exit_code: int
    report: dict[str, Any] | None = None
    error: Exception | None = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


@dataclass
class Workspace:
    """Resolved variables, weighting and context of a job."""

    names: tuple[str, ...]
    weighting: Weighting
    context: SeriesContext
    # permutation[i] is the position in the user's variable list of sorted axis i
    permutation: tuple[int, ...] | None = None
    document: dict[str, Any] = field(default_factory=dict)


def read_document(job: JobSpec) -> tuple[str | dict[str, Any], dict[str, Any]]:
    """Field source of a job: inline text, a text file or a JSON document.

    Returns:
        The field (expression text or JSON object) and the whole JSON document
        (empty for text sources).
    """
    if job.field_text is not None:
        return job.field_text, {}
    assert job.field_file is not None
    content = job.field_file.read_text(encoding="utf-8")
    if job.field_file.suffix.lower() != ".json":
        return content, {}
    try:
        document = json.loads(content)
    except json.JSONDecodeError as e:
        raise InvalidJobError(f"Invalid JSON document: {e}", {"path": str(job.field_file)}) from e
    if isinstance(document, dict) and "field" in document:
        return document["field"], document
    raise InvalidJobError("JSON document has no 'field' entry", {"path": str(job.field_file)})


def prepare(job: JobSpec) -> Workspace:
    """Validate a job and build its series context.

    With ``permute_weights`` a non-monotone weighting is sorted (stably) and the
    variables are relabelled accordingly.

    Raises:
        InvalidJobError: If the job violates its invariants.
        WeightingError: If the weighting is not non-decreasing and may not be permuted.
    """
    job.validate()
    names, weights = tuple(job.variables), tuple(job.weights)
    permutation = None
    if job.permute_weights:
        order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
        if order != list(range(len(weights))):
            permutation = tuple(order)
            names = tuple(names[i] for i in order)
            weights = tuple(weights[i] for i in order)
            logger.info("Permuted variables to %s", ", ".join(names))
    weighting = Weighting(weights)
    return Workspace(names, weighting, SeriesContext(len(names), weighting, job.order), permutation)


def _load_field(job: JobSpec, workspace: Workspace) -> VectorField:
    source, document = read_document(job)
    workspace.document = document
    variables = document.get("variables")
    if variables is not None and not (isinstance(variables, list) and all(isinstance(v, str) for v in variables)):
        raise DocumentError("expected a list of variable names", "variables")
    if variables and tuple(variables) != tuple(job.variables):
        raise InvalidJobError(
            "Variables in the document differ from the job variables",
            {"document": variables, "job": list(job.variables)},
        )
    if workspace.permutation is not None and not isinstance(source, str):
        raise InvalidJobError("Weight permutation needs the field as an expression, not a component list")
    return field_from_json(source, workspace.context, workspace.names)


def _envelope(job: JobSpec, workspace: Workspace, result: dict[str, Any], **kwargs: Any) -> dict[str, Any]:
    header: dict[str, Any] = {"variables": list(workspace.names)}
    if workspace.permutation is not None:
        header["permutation"] = list(workspace.permutation)
    result = {**header, **result}
    return build_report(str(job.command), workspace.weighting.weights, workspace.context.cutoff, result, **kwargs)


def _analyze(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    names = workspace.names
    vector_field = _load_field(job, workspace)
    admissibility = is_admissible(vector_field)
    slices = [
        {"degree": degree, "field": field_to_json(slice_, names)}
        for degree, slice_ in graded_decomposition(vector_field).items()
    ]
    result: dict[str, Any] = {
        "field": field_to_json(vector_field, names),
        "admissible": admissibility.ok,
        "witness": None,
        "euler_like": is_weighted_euler_like(vector_field),
        "slices": slices,
    }
    if not admissibility:
        result["witness"] = {
            "axis": admissibility.axis,
            "exponents": list(admissibility.exponents or ()),
            "degree": admissibility.degree,
        }
    certificates: list[dict[str, Any]] = []
    if admissibility:
        x0 = weighted_linear_approximation(vector_field)
        found = certify_degrees(x0, range(1, workspace.context.cutoff + 1), job.threads)
        certificates = [certificate_to_json(c, names) for c in found]
    linear = weighted_linear_part(vector_field)
    polynomial = char_poly(linear)
    ordering = compatible_ordering(linear)
    exactness = EXACT
    if isinstance(ordering, Unsupported):
        resonances = enumerate_resonances_heuristic(linear, workspace.weighting, workspace.context.cutoff)
        exactness = HEURISTIC
        result["ordering"] = None
        result["irrational_factors"] = {str(block): f.to_text() for block, f in ordering.factors.items()}
    else:
        resonances = enumerate_resonances(ordering, workspace.weighting, workspace.context.cutoff)
        result["ordering"] = [rational_to_json(value) for value in ordering]
        diagnostic = nonresonance_implies_hyperbolic_check(vector_field, workspace.context.cutoff)
        result["hyperbolicity_consistent"] = diagnostic.consistent
    result.update(
        {
            "linear_part": [[rational_to_json(entry) for entry in row] for row in linear.rows()],
            "char_poly": polynomial.to_text(),
            "spectrum_invariant": spectrum_is_invariant(vector_field),
            "resonances": resonances_to_json(resonances),
            "hyperbolic": is_hyperbolic(linear),
        }
    )
    return _envelope(job, workspace, result, certificates=certificates, exactness=exactness)


def _linearize(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    names = workspace.names
    vector_field = _load_field(job, workspace)
    outcome = linearize(vector_field, method=str(job.method), threads=job.threads)
    result = {
        "method": outcome.method,
        "convention": CONVENTION_NOTE,
        "linear_part": field_to_json(outcome.linear_part, names),
        "phi": diffeo_to_json(outcome.phi, names),
        "phi_inverse": diffeo_to_json(outcome.phi_inverse, names),
        "generator": time_field_to_json(outcome.generator, names, offset=1) if outcome.generator else [],
        "residual": field_to_json(outcome.residual, names),
        "verified": outcome.verified,
    }
    certificates = [certificate_to_json(c, names) for c in outcome.certificates]
    return _envelope(job, workspace, result, certificates=certificates)


def _evaluate(job: JobSpec, isotopy: Isotopy, order_bound: bool, names: Sequence[str]) -> dict[str, Any]:
    result: dict[str, Any] = {"isotopy": isotopy_to_json(isotopy, names)}
    if job.at is not None:
        result["at"] = rational_to_json(job.at)
        result["evaluated"] = diffeo_to_json(evaluate_isotopy(isotopy, job.at, order_bound=order_bound), names)
    return result


def _flow(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    source, _ = read_document(job)
    if not isinstance(source, str):
        raise InvalidJobError("Time-dependent fields must be given as expressions")
    time_field = parse_time_field(source, workspace.context, workspace.names)
    isotopy = flow(time_field, job.t_cap)
    bounded = satisfies_flow_order_condition(time_field)
    result = {"order_condition": bounded, **_evaluate(job, isotopy, bounded, workspace.names)}
    return _envelope(job, workspace, result)


def _exp(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    vector_field = _load_field(job, workspace)
    cap = job.t_cap if job.t_cap is not None else workspace.context.cutoff
    isotopy = exponential_flow(vector_field, cap)
    return _envelope(job, workspace, _evaluate(job, isotopy, False, workspace.names))


def _bracket(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    names = workspace.names
    left = _load_field(job, workspace)
    right = parse_field(job.operand_text or "", workspace.context, names)
    result = {
        "left": field_to_json(left, names),
        "right": field_to_json(right, names),
        "bracket": field_to_json(left.bracket(right), names),
    }
    return _envelope(job, workspace, result)


def _pullback(job: JobSpec, workspace: Workspace) -> dict[str, Any]:
    names = workspace.names
    ctx = workspace.context
    vector_field = _load_field(job, workspace)
    components = parse_tuple(job.operand_text or "", ctx, names)
    if len(components) != ctx.dimension:
        raise InvalidJobError(
            f"Diffeomorphism has {len(components)} components for {ctx.dimension} variables",
            {"components": len(components)},
        )
    if workspace.permutation is not None:
        components = [components[i] for i in workspace.permutation]
    # Pad so that truncation of X(phi) cannot leak below the cutoff.
    padded = ctx.padded()
    phi = FormalDiffeo(padded, [component.recast(padded) for component in components])
    pulled = pullback_vf(phi, vector_field.recast(padded)).recast(ctx)
    result = {
        "convention": CONVENTION_NOTE,
        "phi": diffeo_to_json(phi.recast(ctx), names),
        "field": field_to_json(vector_field, names),
        "pullback": field_to_json(pulled, names),
    }
    return _envelope(job, workspace, result)


_HANDLERS = {
    Command.ANALYZE: _analyze,
    Command.LINEARIZE: _linearize,
    Command.FLOW: _flow,
    Command.EXP: _exp,
    Command.BRACKET: _bracket,
    Command.PULLBACK: _pullback,
}


def execute(job: JobSpec) -> dict[str, Any]:
    """Run a job and return its report; errors propagate."""
    workspace = prepare(job)
    logger.debug("Running %s on %d variables, cutoff %d", job.command, len(workspace.names), job.order)
    with log_step(logger, str(job.command)):
        return _HANDLERS[job.command](job, workspace)


def run(job: JobSpec) -> JobOutcome:
    """Run a job, mapping every pipeline error to its documented exit code."""
    try:
        report = execute(job)
    except (WeightlinError, ValueError, OSError) as e:
        logger.debug("Job failed: %s", e)
        return JobOutcome(exit_code_for(e), error=e)
    if job.command == Command.LINEARIZE and not report["result"]["verified"]:
        return JobOutcome(EXIT_UNEXPECTED, report=report)
    return JobOutcome(EXIT_OK, report=report)
