"""Weighted gradings of series and vector fields.

A monomial vector field ``x^alpha d/dx^i`` has weighted degree ``<w, alpha> - w_i``;
the slice of degree ``k`` collects all terms of that degree. Slices start at
``-w_n`` and a field is admissible when it has no slice of negative degree.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .base import ContextMismatchError, NotAdmissibleError, SliceLeakageError
from .flows import TimeVectorField
from .series import INFINITY, MultiIndex, Scalar, SeriesContext, TruncatedSeries, Weighting
from .vectorfields import VectorField

__all__ = [
    "BlockStructure",
    "AdmissibilityCheck",
    "GradedSliceBasis",
    "block_structure",
    "weighted_compositions",
    "graded_component",
    "graded_component_vf",
    "graded_decomposition",
    "vf_order",
    "is_quasi_homogeneous",
    "is_admissible",
    "require_admissible",
    "weighted_linear_approximation",
    "euler_field",
    "is_weighted_euler_like",
    "slice_order_key",
    "slice_basis",
    "slice_dimension",
    "kappa_family",
]


@dataclass(frozen=True)
class BlockStructure:
    """Grouping of the axes by equal weight.

    Attributes:
        block_weights: The distinct weights, ascending.
        multiplicities: Number of axes carrying each distinct weight.
        axis_blocks: Block index of every axis (non-decreasing).
    """

    block_weights: tuple[int, ...]
    multiplicities: tuple[int, ...]
    axis_blocks: tuple[int, ...]

    @property
    def block_count(self) -> int:
        return len(self.block_weights)

    def axes(self, block: int) -> list[int]:
        return [axis for axis, owner in enumerate(self.axis_blocks) if owner == block]


def block_structure(weighting: Weighting) -> BlockStructure:
    distinct = sorted(set(weighting.weights))
    index = {weight: block for block, weight in enumerate(distinct)}
    return BlockStructure(
        block_weights=tuple(distinct),
        multiplicities=tuple(weighting.weights.count(weight) for weight in distinct),
        axis_blocks=tuple(index[weight] for weight in weighting.weights),
    )


@lru_cache(maxsize=4096)
def weighted_compositions(weighting: Weighting, degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices ``alpha`` with ``<w, alpha> = degree`` (bounded knapsack)."""
    if degree < 0:
        return ()
    weights = weighting.weights

    def fill(axis: int, remaining: int) -> Iterator[MultiIndex]:
        if axis == len(weights) - 1:
            if remaining % weights[axis] == 0:
                yield (remaining // weights[axis],)
            return
        for exponent in range(remaining // weights[axis] + 1):
            for rest in fill(axis + 1, remaining - exponent * weights[axis]):
                yield (exponent,) + rest

    return tuple(fill(0, degree))


def graded_component(function: TruncatedSeries, degree: int) -> TruncatedSeries:
    """Projection of a series onto the quasi-homogeneous polynomials of ``degree``."""
    return function.homogeneous_part(degree)


def graded_component_vf(field: VectorField, degree: int) -> VectorField:
    """Slice ``X_[k]``: the terms ``x^alpha d/dx^i`` with ``<w, alpha> - w_i = k``."""
    weights = field.context.weighting.weights
    return VectorField(
        field.context,
        [component.homogeneous_part(weights[i] + degree) for i, component in enumerate(field.components)],
    )


def graded_decomposition(field: VectorField) -> dict[int, VectorField]:
    """Nonzero slices of a field keyed by degree."""
    weights = field.context.weighting.weights
    degrees = sorted({field.context.degree(alpha) - weights[axis] for axis, alpha, _ in field.terms()})
    return {degree: graded_component_vf(field, degree) for degree in degrees}


def vf_order(field: VectorField) -> int | float:
    """Largest ``k`` with every term of degree at least ``k`` (``INFINITY`` for zero)."""
    weights = field.context.weighting.weights
    return min(
        (field.context.degree(alpha) - weights[axis] for axis, alpha, _ in field.terms()),
        default=INFINITY,
    )


def is_quasi_homogeneous(field: VectorField, degree: int) -> bool:
    return graded_component_vf(field, degree) == field


class AdmissibilityCheck(NamedTuple):
    """Outcome of :func:`is_admissible`; carries the first offending term on failure."""

    ok: bool
    axis: int | None = None
    exponents: MultiIndex | None = None
    degree: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_admissible(field: VectorField) -> AdmissibilityCheck:
    """True when every term ``x^alpha d/dx^i`` has ``<w, alpha> >= w_i``."""
    weights = field.context.weighting.weights
    for axis, alpha, _ in field.terms():
        degree = field.context.degree(alpha) - weights[axis]
        if degree < 0:
            return AdmissibilityCheck(False, axis, alpha, degree)
    return AdmissibilityCheck(True)


def require_admissible(field: VectorField) -> None:
    """Raise :class:`NotAdmissibleError` carrying the witness when ``field`` is not admissible."""
    check = is_admissible(field)
    if not check:
        raise NotAdmissibleError(check.axis, check.exponents, check.degree)


def weighted_linear_approximation(field: VectorField) -> VectorField:
    return graded_component_vf(field, 0)


def euler_field(context: SeriesContext) -> VectorField:
    """``sum_i w_i x^i d/dx^i`` for the context's weighting."""
    return VectorField(
        context,
        [TruncatedSeries.variable(context, i).scale(w) for i, w in enumerate(context.weighting.weights)],
    )


def is_weighted_euler_like(field: VectorField) -> bool:
    return bool(is_admissible(field)) and weighted_linear_approximation(field) == euler_field(field.context)


def slice_order_key(element: tuple[int, MultiIndex]) -> tuple[int, int, tuple[int, ...]]:
    """Sort key for slice bases: decreasing ``|alpha|``, then decreasing axis, then decreasing ``alpha``."""
    axis, alpha = element
    return -sum(alpha), -axis, tuple(-a for a in alpha)


@dataclass(frozen=True)
class GradedSliceBasis:
    """Ordered basis of monomial vector fields spanning the slice of a given degree."""

    weighting: Weighting
    degree: int
    elements: tuple[tuple[int, MultiIndex], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[tuple[int, MultiIndex]]:
        return iter(self.elements)

    @property
    def required_cutoff(self) -> int:
        """Smallest cutoff at which every basis element is representable."""
        return self.weighting.max_weight + self.degree

    def index(self, axis: int, alpha: MultiIndex) -> int:
        return self._positions()[(axis, tuple(alpha))]

    def _positions(self) -> dict[tuple[int, MultiIndex], int]:
        return _slice_positions(self)

    def _check_context(self, context: SeriesContext) -> None:
        if context.weighting != self.weighting:
            raise ContextMismatchError("Slice basis and context weightings differ")
        if context.cutoff < self.required_cutoff:
            raise ContextMismatchError(
                f"Cutoff {context.cutoff} cannot hold the slice of degree {self.degree}",
                {"cutoff": context.cutoff, "required": self.required_cutoff},
            )

    def element_field(self, context: SeriesContext, position: int) -> VectorField:
        self._check_context(context)
        axis, alpha = self.elements[position]
        return VectorField.monomial(context, axis, alpha)

    def field(self, context: SeriesContext, coordinates: Sequence[Scalar]) -> VectorField:
        """Vector field with the given coordinates in this basis."""
        self._check_context(context)
        terms = {element: c for element, c in zip(self.elements, coordinates, strict=True) if c}
        return VectorField.from_terms(context, terms)

    def coordinates(self, field: VectorField) -> list[Fraction]:
        """Coordinates of a field lying in this slice.

        Raises:
            SliceLeakageError: If the field has a term outside the slice.
        """
        positions = self._positions()
        values = [Fraction(0)] * len(self.elements)
        for axis, alpha, coefficient in field.terms():
            position = positions.get((axis, alpha))
            if position is None:
                degree = field.context.degree(alpha) - field.context.weighting.weights[axis]
                raise SliceLeakageError(
                    f"Term x^{list(alpha)} d/dx{axis + 1} of degree {degree} is outside the slice of degree "
                    f"{self.degree}",
                    {"axis": axis, "exponents": list(alpha), "degree": degree, "slice": self.degree},
                )
            values[position] = coefficient
        return values


@lru_cache(maxsize=256)
def _slice_positions(basis: GradedSliceBasis) -> dict[tuple[int, MultiIndex], int]:
    return {element: position for position, element in enumerate(basis.elements)}


@lru_cache(maxsize=1024)
def slice_basis(weighting: Weighting, degree: int) -> GradedSliceBasis:
    """Complete ordered basis of the slice of ``degree`` (independent of any cutoff)."""
    elements = [
        (axis, alpha)
        for axis, weight in enumerate(weighting.weights)
        for alpha in weighted_compositions(weighting, weight + degree)
    ]
    elements.sort(key=slice_order_key)
    return GradedSliceBasis(weighting, degree, tuple(elements))


def slice_dimension(weighting: Weighting, degree: int) -> int:
    return sum(len(weighted_compositions(weighting, weight + degree)) for weight in weighting.weights)


def kappa_family(field: VectorField) -> TimeVectorField:
    """``X_t = sum_k t^k X_[k]``: interpolates ``X_[0]`` at ``t = 0`` and ``X`` at ``t = 1``.

    Raises:
        NotAdmissibleError: If the field has a slice of negative degree.
    """
    require_admissible(field)
    top = field.context.cutoff
    return TimeVectorField(field.context, tuple(graded_component_vf(field, k) for k in range(top + 1)))
