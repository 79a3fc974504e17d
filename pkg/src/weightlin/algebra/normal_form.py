"""Weighted linearization of admissible vector fields.

The main pipeline solves the graded homological equations for the generator
``U_t = sum_k t^k U_[k+1]`` of the Moser isotopy, integrates it and evaluates the
flow at ``t = 1``. Every degree is first certified by an exact determinant of the
adjoint operator ``ad_{X[0]}`` restricted to the corresponding slice.

Series are truncated eagerly, so the pipeline works at the padded cutoff
``N + w_n`` and truncates the reported objects back to ``N``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Any, NoReturn

from .base import NotEulerLikeError, NotInvertibleError, SingularAdjointError, SliceLeakageError, WeightlinError
from .flows import (
    Isotopy,
    TimeVectorField,
    evaluate_isotopy,
    exponential_flow,
    flow,
    order_bound_holds,
)
from .linalg import determinant, is_upper_triangular, kernel, solve, transpose
from .series import SeriesContext, Weighting, format_rational
from .vectorfields import FormalDiffeo, VectorField, compose_diffeo, invert_diffeo, pullback_vf
from .weighting import (
    GradedSliceBasis,
    graded_component_vf,
    is_quasi_homogeneous,
    is_weighted_euler_like,
    require_admissible,
    slice_basis,
    slice_dimension,
    weighted_linear_approximation,
)

__all__ = [
    "METHODS",
    "METHOD_ALIASES",
    "AdjointMatrix",
    "DegreeCertificate",
    "LinearizationResult",
    "adjoint_matrix",
    "is_adjoint_invertible",
    "certify_degree",
    "certify_degrees",
    "solve_homological",
    "moser_linearize",
    "euler_like_linearize",
    "lie_series",
    "iterative_linearize_oracle",
    "verify_linearization",
    "moser_equation_defect",
    "linearize",
    "kernel_to_json",
]

logger = logging.getLogger(__name__)

METHODS = ("moser", "euler", "oracle")
METHOD_ALIASES = {"euler-like": "euler"}


@dataclass(frozen=True)
class AdjointMatrix:
    """Matrix of ``ad_{X[0]} = [X[0], .]`` on the slice of ``degree`` in the slice basis.

    Column ``b`` holds the coordinates of ``[X[0], e_b]``.
    """

    degree: int
    basis: GradedSliceBasis
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def is_upper_triangular(self) -> bool:
        return is_upper_triangular(self.rows())

    def diagonal(self) -> list[Fraction]:
        return [self.entries[i][i] for i in range(self.dimension)]


@dataclass(frozen=True)
class DegreeCertificate:
    """Invertibility certificate of the adjoint operator on one slice.

    Attributes:
        degree: Slice degree.
        dimension: Slice dimension.
        invertible: Whether the determinant is nonzero.
        determinant: Exact determinant of the adjoint matrix.
        kernel: Kernel basis as vector fields, empty when invertible.
    """

    degree: int
    dimension: int
    invertible: bool
    determinant: Fraction
    kernel: tuple[VectorField, ...] = ()


@dataclass(frozen=True)
class LinearizationResult:
    """Outcome of a linearization run.

    ``phi`` pulls ``X`` back to its weighted linear approximation; ``phi_inverse``
    expresses the new coordinate functions in terms of the old ones. Both are
    truncated at the requested cutoff.
    """

    method: str
    cutoff: int
    phi: FormalDiffeo
    phi_inverse: FormalDiffeo
    linear_part: VectorField
    residual: VectorField
    verified: bool
    certificates: tuple[DegreeCertificate, ...] = ()
    generator: TimeVectorField | None = None
    isotopy: Isotopy | None = None
    slices: tuple[VectorField, ...] = dataclass_field(default=(), repr=False)

    @property
    def generator_slices(self) -> dict[int, VectorField]:
        """Nonzero generator slices ``U_[k]`` keyed by degree ``k``."""
        if self.generator is None:
            return {}
        return {k + 1: u for k, u in enumerate(self.generator.coefficients) if not u.is_zero}


def kernel_to_json(fields: Iterable[VectorField]) -> list[dict[str, Any]]:
    """Render kernel fields as ``{"terms": [{"axis", "exponents", "coefficient"}]}`` entries."""
    return [
        {
            "terms": [
                {"axis": axis, "exponents": list(alpha), "coefficient": format_rational(coefficient)}
                for axis, alpha, coefficient in kernel_field.terms()
            ]
        }
        for kernel_field in fields
    ]


def _slice_context(context: SeriesContext, degree: int) -> SeriesContext:
    required = context.weighting.max_weight + degree
    return context if context.cutoff >= required else context.with_cutoff(required)


def adjoint_matrix(x0: VectorField, degree: int) -> AdjointMatrix:
    """Matrix of ``[X[0], .]`` on the slice of ``degree``.

    Raises:
        SliceLeakageError: If ``x0`` is not quasi-homogeneous of degree zero.
    """
    if not is_quasi_homogeneous(x0, 0):
        raise SliceLeakageError("Weighted linear part has terms outside the slice of degree 0")
    basis = slice_basis(x0.context.weighting, degree)
    ctx = _slice_context(x0.context, degree)
    linear = x0.recast(ctx)
    columns = [basis.coordinates(linear.bracket(basis.element_field(ctx, b))) for b in range(len(basis))]
    entries = transpose(columns) if columns else []
    return AdjointMatrix(degree, basis, tuple(tuple(row) for row in entries))


def is_adjoint_invertible(matrix: AdjointMatrix) -> DegreeCertificate:
    """Exact determinant of the adjoint matrix, with a kernel basis when it vanishes."""
    det = determinant(matrix.rows())
    fields: tuple[VectorField, ...] = ()
    if not det:
        ctx = SeriesContext(
            matrix.basis.weighting.dimension, matrix.basis.weighting, matrix.basis.required_cutoff
        )
        vectors = kernel(matrix.rows(), columns=matrix.dimension)
        fields = tuple(matrix.basis.field(ctx, vector) for vector in vectors)
    return DegreeCertificate(matrix.degree, matrix.dimension, bool(det), det, fields)


def certify_degree(x0: VectorField, degree: int) -> DegreeCertificate:
    certificate = is_adjoint_invertible(adjoint_matrix(x0, degree))
    logger.debug(
        "Degree %d: dimension %d, determinant %s",
        degree,
        certificate.dimension,
        format_rational(certificate.determinant),
    )
    return certificate


def certify_degrees(x0: VectorField, degrees: Iterable[int], threads: int = 1) -> list[DegreeCertificate]:
    """Certificates for several degrees, computed in parallel when ``threads > 1``.

    Results are returned in the order of ``degrees`` whatever the thread count.
    """
    degrees = list(degrees)
    if threads <= 1 or len(degrees) <= 1:
        return [certify_degree(x0, k) for k in degrees]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda k: certify_degree(x0, k), degrees))


def _raise_singular(certificate: DegreeCertificate) -> NoReturn:
    raise SingularAdjointError(certificate.degree, kernel_to_json(certificate.kernel))


def solve_homological(slices: Sequence[VectorField], k: int, previous: Sequence[VectorField]) -> VectorField:
    """Solve ``[X[0], U[k+1]] = (k+1) X[k+1] - sum_{i<k} [X[k-i], U[i+1]]``.

    Args:
        slices: ``X[0], X[1], ...`` in a context holding the slice of degree ``k + 1``.
        k: Index of the equation, starting at 0.
        previous: The already solved ``U[1], ..., U[k]``.

    Returns:
        The unique ``U[k+1]`` in the slice of degree ``k + 1``.

    Raises:
        SingularAdjointError: If the adjoint operator is singular on that slice.
    """
    x0 = slices[0]
    degree = k + 1
    rhs = slices[degree].scale(degree)
    for i in range(k):
        rhs = rhs - slices[k - i].bracket(previous[i])
    matrix = adjoint_matrix(x0, degree)
    basis = matrix.basis
    ctx = x0.context
    coordinates = basis.coordinates(rhs)
    try:
        solution = solve(matrix.rows(), coordinates)
    except NotInvertibleError:
        _raise_singular(is_adjoint_invertible(matrix))
    generator = basis.field(ctx, solution)
    if x0.bracket(generator) != rhs:
        raise WeightlinError(f"Homological equation of degree {degree} failed back-substitution")
    return generator


@dataclass(frozen=True)
class _Setup:
    context: SeriesContext
    working: SeriesContext
    slice_context: SeriesContext
    top: int
    field: VectorField
    slices: tuple[VectorField, ...]


def _prepare(field: VectorField, weighting: Weighting | None, cutoff: int | None) -> _Setup:
    weighting = weighting or field.context.weighting
    cutoff = field.context.cutoff if cutoff is None else cutoff
    ctx = SeriesContext(field.dimension, weighting, cutoff)
    if field.context != ctx:
        field = field.recast(ctx)
    require_admissible(field)
    working = ctx.padded()
    top = max(working.cutoff - weighting.min_weight, 0)
    slice_context = working.with_cutoff(top + weighting.max_weight)
    # Slices above N come from the (zero) tail of the truncated input.
    wide = field.recast(slice_context)
    slices = tuple(graded_component_vf(wide, k) for k in range(top + 1))
    logger.debug(
        "Linearization setup: cutoff %d, working cutoff %d, top degree %d", cutoff, working.cutoff, top
    )
    return _Setup(ctx, working, slice_context, top, field, slices)


def _finish(
    setup: _Setup,
    method: str,
    phi_working: FormalDiffeo,
    certificates: Sequence[DegreeCertificate],
    generator: TimeVectorField | None = None,
    isotopy: Isotopy | None = None,
) -> LinearizationResult:
    phi_inverse_working = invert_diffeo(phi_working)
    residual, verified = verify_linearization(setup.field, phi_working)
    ctx = setup.context
    return LinearizationResult(
        method=method,
        cutoff=ctx.cutoff,
        phi=phi_working.recast(ctx),
        phi_inverse=phi_inverse_working.recast(ctx),
        linear_part=weighted_linear_approximation(setup.field),
        residual=residual,
        verified=verified,
        certificates=tuple(certificates),
        generator=generator,
        isotopy=isotopy,
        slices=setup.slices,
    )


def _integrate(setup: _Setup, generators: Sequence[VectorField]) -> tuple[TimeVectorField, Isotopy, FormalDiffeo]:
    working = setup.working
    u_t = TimeVectorField(working, tuple(u.recast(working) for u in generators))
    isotopy = flow(u_t, t_cap=setup.top)
    if not order_bound_holds(isotopy.coefficients, working):
        raise WeightlinError("Moser isotopy violates the weighted order bound")
    phi = evaluate_isotopy(isotopy, 1, order_bound=True)
    generator = TimeVectorField(setup.slice_context, tuple(generators))
    return generator, isotopy, phi


def moser_linearize(
    field: VectorField,
    weighting: Weighting | None = None,
    cutoff: int | None = None,
    *,
    threads: int = 1,
) -> LinearizationResult:
    """Linearize an admissible field through the Moser isotopy.

    Args:
        field: Admissible vector field.
        weighting: Weighting to use; defaults to the field's own.
        cutoff: Reported cutoff ``N``; defaults to the field's own.
        threads: Worker threads for the per-degree certificates.

    Returns:
        A :class:`LinearizationResult` with ``phi^* X = X[0]`` through the cutoff.

    Raises:
        NotAdmissibleError: If the field has a slice of negative degree.
        SingularAdjointError: If some degree between 1 and the working top degree has a
            non-invertible adjoint operator.
    """
    setup = _prepare(field, weighting, cutoff)
    x0 = setup.slices[0]
    certificates = certify_degrees(x0, range(1, setup.top + 1), threads)
    for certificate in certificates:
        if not certificate.invertible:
            _raise_singular(certificate)
    if all(s.is_zero for s in setup.slices[1:]):
        logger.info("Field equals its weighted linear approximation; returning the identity")
        return _finish(setup, "moser", FormalDiffeo.identity(setup.working), certificates)
    generators: list[VectorField] = []
    for k in range(setup.top):
        generators.append(solve_homological(setup.slices, k, generators))
    defect = moser_equation_defect(
        TimeVectorField(setup.slice_context, setup.slices),
        TimeVectorField(setup.slice_context, tuple(generators)),
    )
    if any(not defect.coefficient(k).is_zero for k in range(setup.top)):
        raise WeightlinError("Generator does not satisfy the Moser equation")
    generator, isotopy, phi = _integrate(setup, generators)
    logger.info("Moser linearization solved %d homological equations", len(generators))
    return _finish(setup, "moser", phi, certificates, generator, isotopy)


def euler_like_linearize(
    field: VectorField,
    weighting: Weighting | None = None,
    cutoff: int | None = None,
) -> LinearizationResult:
    """Fast path for weighted Euler-like fields: ``U[k+1] = X[k+1]``, no linear solves.

    On the slice of degree ``k`` the adjoint operator of the Euler field is ``k`` times
    the identity, so the certificates are known in closed form.

    Raises:
        NotEulerLikeError: If the field's weighted linear part is not the Euler field.
    """
    setup = _prepare(field, weighting, cutoff)
    if not is_weighted_euler_like(setup.field):
        raise NotEulerLikeError("Field is not weighted Euler-like")
    weighting_ = setup.context.weighting
    certificates = []
    for k in range(1, setup.top + 1):
        size = slice_dimension(weighting_, k)
        certificates.append(DegreeCertificate(k, size, True, Fraction(k) ** size))
    generators = list(setup.slices[1:])
    if all(u.is_zero for u in generators):
        return _finish(setup, "euler", FormalDiffeo.identity(setup.working), certificates)
    generator, isotopy, phi = _integrate(setup, generators)
    return _finish(setup, "euler", phi, certificates, generator, isotopy)


def lie_series(generator: VectorField, field: VectorField) -> VectorField:
    """``sum_j ad_V^j Y / j!``: pullback of ``Y`` by the time-one flow of ``V``.

    ``V`` must have positive weighted order so that the series terminates modulo the
    cutoff.
    """
    total = field
    term = field
    j = 0
    while True:
        j += 1
        term = generator.bracket(term).scale(Fraction(1, j))
        if term.is_zero:
            return total
        total = total + term


def iterative_linearize_oracle(
    field: VectorField,
    weighting: Weighting | None = None,
    cutoff: int | None = None,
) -> LinearizationResult:
    """Degree-by-degree normalization by time-one maps.

    For each degree ``k`` solve ``[X[0], V] = Y[k]``, replace ``Y`` by its pullback
    along ``exp(V)`` and compose the time-one maps. Independent of the Moser pipeline
    and used to cross-check it.
    """
    setup = _prepare(field, weighting, cutoff)
    x0 = setup.slices[0]
    working = setup.working
    current = setup.field.recast(setup.slice_context)
    phi = FormalDiffeo.identity(working)
    certificates: list[DegreeCertificate] = []
    for k in range(1, setup.top + 1):
        matrix = adjoint_matrix(x0, k)
        certificate = is_adjoint_invertible(matrix)
        certificates.append(certificate)
        if not certificate.invertible:
            _raise_singular(certificate)
        target = graded_component_vf(current, k)
        if target.is_zero:
            continue
        coordinates = solve(matrix.rows(), matrix.basis.coordinates(target))
        generator = matrix.basis.field(setup.slice_context, coordinates)
        current = lie_series(generator, current)
        step = evaluate_isotopy(exponential_flow(generator.recast(working), setup.top), 1)
        phi = compose_diffeo(phi, step)
        logger.debug("Oracle step %d: normalized", k)
    return _finish(setup, "oracle", phi, certificates)


def verify_linearization(
    field: VectorField,
    phi: FormalDiffeo,
    weighting: Weighting | None = None,
    cutoff: int | None = None,
) -> tuple[VectorField, bool]:
    """Residual ``phi^* X - X[0]`` computed at the padded cutoff and truncated to ``N``.

    Args:
        field: The original field.
        phi: Candidate linearizing diffeomorphism.
        weighting: Weighting to use; defaults to the field's own.
        cutoff: Cutoff ``N``; defaults to the field's own.

    Returns:
        The residual at cutoff ``N`` and whether it vanishes.
    """
    weighting = weighting or field.context.weighting
    cutoff = field.context.cutoff if cutoff is None else cutoff
    ctx = SeriesContext(field.dimension, weighting, cutoff)
    working = ctx.with_cutoff(max(ctx.padded().cutoff, phi.context.cutoff))
    padded_field = field.recast(working)
    residual = pullback_vf(phi.recast(working), padded_field) - weighted_linear_approximation(padded_field)
    reported = residual.recast(ctx)
    if not reported.is_zero:
        logger.warning("Linearization residual does not vanish through cutoff %d", cutoff)
    return reported, reported.is_zero


def moser_equation_defect(kappa: TimeVectorField, generator: TimeVectorField) -> TimeVectorField:
    """``d/dt X_t + [U_t, X_t]``; its ``t^k`` coefficients vanish for every solved degree."""
    return kappa.derivative() + generator.bracket(kappa)


def linearize(
    field: VectorField,
    weighting: Weighting | None = None,
    cutoff: int | None = None,
    *,
    method: str = "moser",
    threads: int = 1,
) -> LinearizationResult:
    """Dispatch to a linearization method.

    ``moser`` switches to the Euler-like fast path when the weighted linear part is the
    Euler field; ``euler`` requires it.
    """
    method = METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise WeightlinError(f"Unknown method '{method}'", {"methods": list(METHODS)})
    if method == "oracle":
        return iterative_linearize_oracle(field, weighting, cutoff)
    if method == "euler":
        return euler_like_linearize(field, weighting, cutoff)
    weighting = weighting or field.context.weighting
    cutoff = field.context.cutoff if cutoff is None else cutoff
    recast = field.recast(SeriesContext(field.dimension, weighting, cutoff))
    if is_weighted_euler_like(recast):
        logger.info("Weighted Euler-like field detected; using the fast path")
        return euler_like_linearize(field, weighting, cutoff)
    return moser_linearize(field, weighting, cutoff, threads=threads)
