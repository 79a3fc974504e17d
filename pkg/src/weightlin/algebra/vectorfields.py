"""Formal vector fields and formal diffeomorphisms.

A vector field is stored as the tuple of its values on the coordinates,
``X = sum_i X^i d/dx^i``. A formal diffeomorphism is the tuple of images of the
coordinates under an algebra automorphism, so that ``phi(f) = f(phi^1, ..., phi^n)``.
Pullback of a vector field follows ``(phi^* X)(x) = D phi(x)^{-1} [X(phi(x))]``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from typing import NamedTuple, Protocol, Self, TypeVar

from .base import AxisError, ContextMismatchError, NotDiffeomorphismError, NotInvertibleError
from .linalg import Matrix, determinant, inverse
from .series import MultiIndex, Scalar, SeriesContext, TruncatedSeries, format_rational

__all__ = [
    "VectorField",
    "FormalDiffeo",
    "DiffeoCheck",
    "apply",
    "lie_bracket",
    "jacobian",
    "jacobian_at_zero",
    "is_formal_diffeo",
    "compose_diffeo",
    "invert_diffeo",
    "pullback_vf",
    "pullback_function",
    "solve_series_system",
]

logger = logging.getLogger(__name__)


class RingElement(Protocol):
    """What the series-matrix solver needs from its entries."""

    @property
    def constant_term(self) -> Fraction: ...

    @property
    def is_zero(self) -> bool: ...

    def reciprocal(self) -> Self: ...

    def __mul__(self, other: Self) -> Self: ...

    def __sub__(self, other: Self) -> Self: ...


R = TypeVar("R", bound=RingElement)


class VectorField:
    """Derivation of the truncated series algebra, ``X = sum_i X^i d/dx^i``."""

    __slots__ = ("context", "components")

    def __init__(self, context: SeriesContext, components: Sequence[TruncatedSeries]):
        components = tuple(components)
        if len(components) != context.dimension:
            raise AxisError(f"Vector field needs {context.dimension} components, got {len(components)}")
        for component in components:
            if component.context != context:
                raise ContextMismatchError("Vector field component lives in another context")
        self.context = context
        self.components: tuple[TruncatedSeries, ...] = components

    @classmethod
    def zero(cls, context: SeriesContext) -> VectorField:
        return cls(context, [TruncatedSeries.zero(context)] * context.dimension)

    @classmethod
    def from_terms(cls, context: SeriesContext, terms: Mapping[tuple[int, MultiIndex], Scalar]) -> VectorField:
        """Build from a map ``(axis, alpha) -> coefficient``."""
        per_axis: list[dict[MultiIndex, Scalar]] = [{} for _ in range(context.dimension)]
        for (axis, alpha), coefficient in terms.items():
            context.check_axis(axis)
            per_axis[axis][tuple(alpha)] = coefficient
        return cls(context, [TruncatedSeries(context, terms) for terms in per_axis])

    @classmethod
    def monomial(cls, context: SeriesContext, axis: int, alpha: Sequence[int], coefficient: Scalar = 1) -> VectorField:
        return cls.from_terms(context, {(axis, tuple(alpha)): coefficient})

    @classmethod
    def linear(cls, context: SeriesContext, matrix: Sequence[Sequence[Scalar]]) -> VectorField:
        """Linear field whose component i is ``sum_j matrix[i][j] x^j``."""
        return cls(
            context,
            [
                sum(
                    (TruncatedSeries.variable(context, j).scale(c) for j, c in enumerate(row)),
                    TruncatedSeries.zero(context),
                )
                for row in matrix
            ],
        )

    @property
    def dimension(self) -> int:
        return self.context.dimension

    @property
    def is_zero(self) -> bool:
        return all(component.is_zero for component in self.components)

    def __getitem__(self, axis: int) -> TruncatedSeries:
        return self.components[axis]

    def __iter__(self) -> Iterator[TruncatedSeries]:
        return iter(self.components)

    def terms(self) -> Iterator[tuple[int, MultiIndex, Fraction]]:
        """Monomial terms ``(axis, alpha, coefficient)``, axis-major in canonical order."""
        for axis, component in enumerate(self.components):
            for alpha, coefficient in component.items():
                yield axis, alpha, coefficient

    def apply(self, function: TruncatedSeries) -> TruncatedSeries:
        """Return ``X(f) = sum_i X^i df/dx^i``."""
        if function.context != self.context:
            raise ContextMismatchError("Function and vector field contexts differ")
        result = TruncatedSeries.zero(self.context)
        for axis, component in enumerate(self.components):
            if not component.is_zero:
                result = result + component * function.partial_derivative(axis)
        return result

    __call__ = apply

    def bracket(self, other: VectorField) -> VectorField:
        """Commutator ``[X, Y]`` with component i equal to ``X(Y^i) - Y(X^i)``."""
        self._check(other)
        return VectorField(
            self.context,
            [self.apply(b) - other.apply(a) for a, b in zip(self.components, other.components, strict=True)],
        )

    def recast(self, context: SeriesContext) -> VectorField:
        return VectorField(context, [component.recast(context) for component in self.components])

    def truncated_components(self, order: int) -> VectorField:
        """Keep, in component i, the terms of weighted degree at most ``order + w_i``."""
        weights = self.context.weighting.weights
        return VectorField(
            self.context,
            [component.truncated(order + weights[i]) for i, component in enumerate(self.components)],
        )

    def _check(self, other: VectorField) -> None:
        if other.context != self.context:
            raise ContextMismatchError("Vector field contexts differ")

    def __add__(self, other: VectorField) -> VectorField:
        if not isinstance(other, VectorField):
            return NotImplemented
        self._check(other)
        return VectorField(self.context, [a + b for a, b in zip(self.components, other.components, strict=True)])

    def __sub__(self, other: VectorField) -> VectorField:
        if not isinstance(other, VectorField):
            return NotImplemented
        self._check(other)
        return VectorField(self.context, [a - b for a, b in zip(self.components, other.components, strict=True)])

    def __neg__(self) -> VectorField:
        return VectorField(self.context, [-a for a in self.components])

    def scale(self, factor: Scalar) -> VectorField:
        return VectorField(self.context, [a.scale(factor) for a in self.components])

    def __mul__(self, factor: object) -> VectorField:
        if isinstance(factor, (int, Fraction)) and not isinstance(factor, bool):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.context == other.context and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.context, self.components))

    def __repr__(self) -> str:
        body = " + ".join(f"({component!r})*d/dx{i + 1}" for i, component in enumerate(self.components))
        return f"VectorField({body})"


def apply(field: VectorField, function: TruncatedSeries) -> TruncatedSeries:
    return field.apply(function)


def lie_bracket(left: VectorField, right: VectorField) -> VectorField:
    return left.bracket(right)


class DiffeoCheck(NamedTuple):
    """Outcome of :func:`is_formal_diffeo`; truthy when the tuple is a diffeomorphism."""

    ok: bool
    reason: str | None = None
    determinant: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def jacobian(components: Sequence[TruncatedSeries]) -> list[list[TruncatedSeries]]:
    """Matrix of formal partial derivatives, entry ``(i, j) = d phi^i / d x^j``."""
    return [[component.partial_derivative(j) for j in range(len(components))] for component in components]


def jacobian_at_zero(components: Sequence[TruncatedSeries]) -> Matrix:
    """Constant Jacobian ``D phi(0)``: entry ``(i, j)`` is the coefficient of ``x^j`` in ``phi^i``."""
    size = len(components)
    return [
        [component.coefficient(tuple(int(k == j) for k in range(size))) for j in range(size)]
        for component in components
    ]


def is_formal_diffeo(components: Sequence[TruncatedSeries]) -> DiffeoCheck:
    """Check zero constant terms and invertibility of ``D phi(0)``."""
    for axis, component in enumerate(components):
        if component.constant_term:
            return DiffeoCheck(
                False,
                f"component {axis + 1} has nonzero constant term {format_rational(component.constant_term)}",
            )
    det = determinant(jacobian_at_zero(components))
    if not det:
        return DiffeoCheck(False, "the Jacobian at the origin is singular", det)
    return DiffeoCheck(True, None, det)


class FormalDiffeo:
    """Formal diffeomorphism given by the images ``phi^i`` of the coordinates."""

    __slots__ = ("context", "components")

    def __init__(self, context: SeriesContext, components: Sequence[TruncatedSeries]):
        components = tuple(components)
        if len(components) != context.dimension:
            raise AxisError(f"Diffeomorphism needs {context.dimension} components, got {len(components)}")
        for component in components:
            if component.context != context:
                raise ContextMismatchError("Diffeomorphism component lives in another context")
        check = is_formal_diffeo(components)
        if not check:
            raise NotDiffeomorphismError(f"Not a formal diffeomorphism: {check.reason}", {"reason": check.reason})
        self.context = context
        self.components: tuple[TruncatedSeries, ...] = components

    @classmethod
    def identity(cls, context: SeriesContext) -> FormalDiffeo:
        return cls(context, [TruncatedSeries.variable(context, i) for i in range(context.dimension)])

    @classmethod
    def linear(cls, context: SeriesContext, matrix: Sequence[Sequence[Scalar]]) -> FormalDiffeo:
        """Linear map with ``phi^i = sum_j matrix[i][j] x^j``."""
        return cls(context, VectorField.linear(context, matrix).components)

    @property
    def is_identity(self) -> bool:
        return self == FormalDiffeo.identity(self.context)

    def __getitem__(self, axis: int) -> TruncatedSeries:
        return self.components[axis]

    def __iter__(self) -> Iterator[TruncatedSeries]:
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def jacobian_at_zero(self) -> Matrix:
        return jacobian_at_zero(self.components)

    def pullback(self, function: TruncatedSeries) -> TruncatedSeries:
        return function.compose(self.components)

    __call__ = pullback

    def recast(self, context: SeriesContext) -> FormalDiffeo:
        return FormalDiffeo(context, [component.recast(context) for component in self.components])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalDiffeo):
            return NotImplemented
        return self.context == other.context and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.context, self.components))

    def __repr__(self) -> str:
        return f"FormalDiffeo({', '.join(repr(c) for c in self.components)})"


def compose_diffeo(outer: FormalDiffeo, inner: FormalDiffeo) -> FormalDiffeo:
    """Tuple whose component i is ``outer^i(inner)``.

    With this convention ``pullback_vf(compose_diffeo(psi, phi), X)`` equals
    ``pullback_vf(phi, pullback_vf(psi, X))``.
    """
    if outer.context != inner.context:
        raise ContextMismatchError("Diffeomorphism contexts differ")
    return FormalDiffeo(outer.context, [component.compose(inner.components) for component in outer.components])


def invert_diffeo(phi: FormalDiffeo) -> FormalDiffeo:
    """Inverse tuple ``psi`` with ``phi(psi) = psi(phi) = identity`` modulo the cutoff.

    Writing ``phi = L x + h(x)`` with ``L = D phi(0)``, each sweep of
    ``psi <- L^{-1} (x - h(psi))`` fixes at least one more degree, so the loop
    stabilises after at most ``N + 1`` sweeps.

    Raises:
        NotInvertibleError: If the iteration fails to reach an inverse, which happens only
            when ``phi`` does not preserve the weighted filtration.
    """
    ctx = phi.context
    size = ctx.dimension
    linear_inverse = inverse(phi.jacobian_at_zero())
    coordinates = [TruncatedSeries.variable(ctx, i) for i in range(size)]
    nonlinear = [
        component - sum((coordinates[j].scale(c) for j, c in enumerate(row)), TruncatedSeries.zero(ctx))
        for component, row in zip(phi.components, phi.jacobian_at_zero(), strict=True)
    ]

    def apply_linear_inverse(values: Sequence[TruncatedSeries]) -> list[TruncatedSeries]:
        return [
            sum((values[j].scale(c) for j, c in enumerate(row) if c), TruncatedSeries.zero(ctx))
            for row in linear_inverse
        ]

    candidate = apply_linear_inverse(coordinates)
    for sweep in range(ctx.cutoff + 2):
        corrected = apply_linear_inverse(
            [coordinates[i] - nonlinear[i].compose(candidate) for i in range(size)]
        )
        if corrected == candidate:
            logger.debug("Diffeomorphism inverse stabilised after %d sweeps", sweep)
            break
        candidate = corrected
    result = FormalDiffeo(ctx, candidate)
    if compose_diffeo(phi, result) != FormalDiffeo.identity(ctx):
        raise NotInvertibleError("Diffeomorphism inversion did not converge modulo the cutoff")
    return result


def solve_series_system(matrix: Sequence[Sequence[R]], rhs: Sequence[R]) -> list[R]:
    """Solve ``matrix v = rhs`` over a local ring of truncated series.

    Pivots are chosen among entries with a nonzero constant term, which exist in every
    column whenever the constant part of the matrix is invertible.

    Raises:
        NotInvertibleError: If some column has no unit pivot.
    """
    size = len(matrix)
    rows = [list(row) + [value] for row, value in zip(matrix, rhs, strict=True)]
    for column in range(size):
        pivot = next((r for r in range(column, size) if rows[r][column].constant_term), None)
        if pivot is None:
            raise NotInvertibleError("Series matrix is not invertible", {"column": column})
        rows[column], rows[pivot] = rows[pivot], rows[column]
        unit = rows[column][column].reciprocal()
        rows[column] = [entry * unit for entry in rows[column]]
        for r in range(size):
            factor = rows[r][column]
            if r != column and not factor.is_zero:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[column], strict=True)]
    return [rows[i][size] for i in range(size)]


def pullback_vf(phi: FormalDiffeo, field: VectorField) -> VectorField:
    """Pullback ``phi^* X = D phi^{-1} [X(phi)]``.

    Exact in the truncated algebra for polynomial inputs; callers feeding truncations of
    infinite series pad the cutoff by ``w_n`` and truncate afterwards.
    """
    if phi.context != field.context:
        raise ContextMismatchError("Diffeomorphism and vector field contexts differ")
    pushed = [component.compose(phi.components) for component in field.components]
    return VectorField(phi.context, solve_series_system(jacobian(phi.components), pushed))


def pullback_function(phi: FormalDiffeo, function: TruncatedSeries) -> TruncatedSeries:
    return phi.pullback(function)
