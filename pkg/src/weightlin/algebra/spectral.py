"""Eigenvalue-side analysis of weighted linear parts.

Everything here is exact over the rationals except
:func:`enumerate_resonances_heuristic`, which works on double precision eigenvalues
and stamps its report accordingly.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ..constants import FLOAT_TOLERANCE
from .base import NonzeroConstantTermError, SpectralError
from .linalg import characteristic_coefficients, transpose
from .polynomial import Polynomial
from .series import MultiIndex, Scalar, Weighting
from .vectorfields import VectorField, jacobian_at_zero
from .weighting import BlockStructure, block_structure, graded_component_vf, slice_basis

__all__ = [
    "EXACT",
    "HEURISTIC",
    "LinearPart",
    "Unsupported",
    "Resonance",
    "ResonanceReport",
    "HyperbolicityDiagnostic",
    "linear_part",
    "weighted_linear_part",
    "char_poly",
    "spectrum_is_invariant",
    "compatible_ordering",
    "enumerate_resonances",
    "enumerate_resonances_heuristic",
    "imaginary_axis_parts",
    "is_hyperbolic",
    "is_hyperbolic_polynomial",
    "nonresonance_implies_hyperbolic_check",
]

logger = logging.getLogger(__name__)

EXACT = "exact"
HEURISTIC = "heuristic"


@dataclass(frozen=True)
class LinearPart:
    """Linear part of a field acting on the dual space.

    ``matrix`` is the transpose of ``DX(0)``: column ``j`` lists the linear
    coefficients of ``X^j``.
    """

    matrix: tuple[tuple[Fraction, ...], ...]
    blocks: BlockStructure

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def rows(self) -> list[list[Fraction]]:
        return [list(row) for row in self.matrix]

    def block(self, index: int) -> list[list[Fraction]]:
        """Square submatrix on the axes of one weight block."""
        axes = self.blocks.axes(index)
        return [[self.matrix[i][j] for j in axes] for i in axes]

    def is_block_diagonal(self) -> bool:
        owners = self.blocks.axis_blocks
        return all(
            not self.matrix[i][j]
            for i in range(self.dimension)
            for j in range(self.dimension)
            if owners[i] != owners[j]
        )


@dataclass(frozen=True)
class Unsupported:
    """Returned by :func:`compatible_ordering` when some block spectrum is not rational.

    Attributes:
        factors: Per block, the monic cofactor left after removing rational roots.
        rational_roots: Per block, the rational roots that were found.
    """

    factors: dict[int, Polynomial]
    rational_roots: dict[int, list[Fraction]]

    @property
    def reason(self) -> str:
        parts = [f"block {block}: {factor.to_text()}" for block, factor in sorted(self.factors.items())]
        return "Characteristic polynomial has no rational roots for " + "; ".join(parts)


class Resonance(NamedTuple):
    """``(i, alpha)`` with ``<lambda, alpha> = lambda_i`` and ``<w, alpha> > w_i``."""

    axis: int
    exponents: MultiIndex
    degree: int


@dataclass(frozen=True)
class ResonanceReport:
    weighting: Weighting
    eigenvalues: tuple[Fraction | complex, ...]
    resonances: tuple[Resonance, ...]
    k_max: int
    exactness: str = EXACT
    tolerance: float | None = None

    @property
    def is_nonresonant(self) -> bool:
        return not self.resonances

    def at_degree(self, degree: int) -> list[Resonance]:
        return [r for r in self.resonances if r.degree == degree]


class HyperbolicityDiagnostic(NamedTuple):
    consistent: bool
    nonresonant: bool
    hyperbolic: bool
    zero_eigenvalue: bool
    k_max: int


def _require_vanishing(field: VectorField) -> None:
    for axis, component in enumerate(field.components):
        if component.constant_term:
            raise NonzeroConstantTermError(
                f"Component {axis + 1} has a nonzero constant term; the field does not vanish at 0",
                {"axis": axis},
            )


def linear_part(field: VectorField) -> LinearPart:
    """Unweighted linear part ``X_lin`` in the transposed convention.

    Raises:
        NonzeroConstantTermError: If the field does not vanish at the origin.
    """
    _require_vanishing(field)
    matrix = transpose(jacobian_at_zero(field.components))
    return LinearPart(tuple(tuple(row) for row in matrix), block_structure(field.context.weighting))


def weighted_linear_part(field: VectorField) -> LinearPart:
    """Linear part of ``X[0]``, cross-checked against the degree-zero slice of ``X_lin``.

    Raises:
        NonzeroConstantTermError: If the field does not vanish at the origin.
        SpectralError: If the two computations disagree.
    """
    _require_vanishing(field)
    sliced_first = linear_part(graded_component_vf(field, 0))
    linearized = VectorField.linear(field.context, jacobian_at_zero(field.components))
    linearized_first = linear_part(graded_component_vf(linearized, 0))
    if sliced_first != linearized_first:
        raise SpectralError("Weighted and unweighted linear approximations do not commute")
    return sliced_first


def char_poly(linear: LinearPart | Sequence[Sequence[Scalar]]) -> Polynomial:
    """Monic characteristic polynomial ``det(t I - M)``."""
    matrix = linear.rows() if isinstance(linear, LinearPart) else [[Fraction(e) for e in row] for row in linear]
    return Polynomial(reversed(characteristic_coefficients(matrix)))


def spectrum_is_invariant(field: VectorField) -> bool:
    """``X_lin`` and ``(X[0])_lin`` share their characteristic polynomial."""
    return char_poly(linear_part(field)) == char_poly(weighted_linear_part(field))


def compatible_ordering(linear: LinearPart) -> tuple[Fraction, ...] | Unsupported:
    """Eigenvalue ordering with ``lambda_i`` an eigenvalue of the block containing axis ``i``.

    Within a block eigenvalues are listed ascending, with multiplicity.

    Raises:
        SpectralError: If the linear part is not block diagonal.
    """
    if not linear.is_block_diagonal():
        raise SpectralError("Linear part is not block diagonal along the weighting blocks")
    ordering: list[Fraction] = [Fraction(0)] * linear.dimension
    factors: dict[int, Polynomial] = {}
    found: dict[int, list[Fraction]] = {}
    for index in range(linear.blocks.block_count):
        roots, cofactor = char_poly(linear.block(index)).split_rational()
        found[index] = roots
        if cofactor.degree >= 1:
            factors[index] = cofactor
            continue
        for axis, root in zip(linear.blocks.axes(index), roots, strict=True):
            ordering[axis] = root
    if factors:
        logger.debug("No rational ordering: %d block(s) with irrational spectrum", len(factors))
        return Unsupported(factors, found)
    return tuple(ordering)


def enumerate_resonances(eigenvalues: Sequence[Scalar], weighting: Weighting, k_max: int) -> ResonanceReport:
    """All resonances of weighted degree ``1..k_max``, tested exactly."""
    lam = [Fraction(v) for v in eigenvalues]
    found: list[Resonance] = []
    for k in range(1, k_max + 1):
        for axis, alpha in slice_basis(weighting, k):
            if sum((value * a for value, a in zip(lam, alpha, strict=True)), Fraction(0)) == lam[axis]:
                found.append(Resonance(axis, alpha, k))
    logger.debug("Exact resonance scan through degree %d: %d found", k_max, len(found))
    return ResonanceReport(weighting, tuple(lam), tuple(found), k_max, EXACT)


def enumerate_resonances_heuristic(
    linear: LinearPart,
    weighting: Weighting,
    k_max: int,
    tolerance: float = FLOAT_TOLERANCE,
) -> ResonanceReport:
    """Resonance scan on floating-point block eigenvalues, equality within ``tolerance``."""
    eigenvalues: list[complex] = [0j] * linear.dimension
    for index in range(linear.blocks.block_count):
        block = np.array(linear.block(index), dtype=float)
        values = sorted(np.linalg.eigvals(block), key=lambda z: (round(z.real, 12), round(z.imag, 12)))
        for axis, value in zip(linear.blocks.axes(index), values, strict=True):
            eigenvalues[axis] = complex(value)
    lam = np.array(eigenvalues, dtype=complex)
    found: list[Resonance] = []
    for k in range(1, k_max + 1):
        for axis, alpha in slice_basis(weighting, k):
            if abs(complex(np.dot(lam, alpha)) - lam[axis]) <= tolerance:
                found.append(Resonance(axis, alpha, k))
    logger.debug("Heuristic resonance scan through degree %d: %d found", k_max, len(found))
    return ResonanceReport(weighting, tuple(eigenvalues), tuple(found), k_max, HEURISTIC, tolerance)


def imaginary_axis_parts(polynomial: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Real polynomials ``A``, ``B`` with ``p(i t) = A(t) + i B(t)``."""
    real: list[Fraction] = []
    imaginary: list[Fraction] = []
    for k, c in enumerate(polynomial.coefficients):
        sign = 1 if k % 4 in (0, 1) else -1
        if k % 2 == 0:
            real.append(sign * c)
            imaginary.append(Fraction(0))
        else:
            real.append(Fraction(0))
            imaginary.append(sign * c)
    return Polynomial(real), Polynomial(imaginary)


def is_hyperbolic_polynomial(polynomial: Polynomial) -> bool:
    """No root on the imaginary axis: ``p(0) != 0`` and ``gcd(A, B)`` has no real root."""
    if polynomial(0) == 0:
        return False
    real, imaginary = imaginary_axis_parts(polynomial)
    common = real.gcd(imaginary)
    return common.degree < 1 or not common.has_real_root()


def is_hyperbolic(linear: LinearPart) -> bool:
    return is_hyperbolic_polynomial(char_poly(linear))


def nonresonance_implies_hyperbolic_check(field: VectorField, k_max: int) -> HyperbolicityDiagnostic:
    """Check that weighted non-resonance rules out a zero eigenvalue.

    The scan covers at least degree ``w_n`` so that every forced resonance ``(j, 2 e_j)``
    of a zero eigenvalue is reached.

    Raises:
        SpectralError: If the weighted linear part has an irrational spectrum.
    """
    weighting = field.context.weighting
    linear = weighted_linear_part(field)
    ordering = compatible_ordering(linear)
    if isinstance(ordering, Unsupported):
        raise SpectralError(ordering.reason, {"blocks": sorted(ordering.factors)})
    effective = max(k_max, weighting.max_weight)
    report = enumerate_resonances(ordering, weighting, effective)
    zero = any(value == 0 for value in ordering)
    hyperbolic = is_hyperbolic(linear)
    consistent = not report.is_nonresonant or (hyperbolic and not zero)
    return HyperbolicityDiagnostic(consistent, report.is_nonresonant, hyperbolic, zero, effective)
