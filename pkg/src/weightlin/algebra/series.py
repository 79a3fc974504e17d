"""Truncated multivariate power series with exact rational coefficients.

A series lives in a :class:`SeriesContext` which fixes the number of variables,
the coordinate weighting and the weighted degree cutoff ``N``. Every operation
truncates eagerly, so a series is an element of the quotient ring of polynomials
modulo the monomials of weighted degree above ``N``.

Axes are 0-based throughout the Python API.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .base import (
    AxisError,
    ContextMismatchError,
    NonzeroConstantTermError,
    NotInvertibleError,
    WeightingError,
)

__all__ = [
    "INFINITY",
    "MultiIndex",
    "Scalar",
    "Weighting",
    "SeriesContext",
    "TruncatedSeries",
    "format_rational",
    "weighted_degree",
    "theta_w",
]

MultiIndex = tuple[int, ...]
Scalar = int | Fraction

# Order of the zero series.
INFINITY = math.inf


def format_rational(value: Scalar) -> str:
    """Render a rational as ``"p/q"`` in lowest terms (``q`` is always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Weighting:
    """Positive, non-decreasing integer weights assigned to the coordinates."""

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        weights = tuple(self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise WeightingError("Weighting must have at least one weight")
        for weight in weights:
            if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
                raise WeightingError(f"Weights must be positive integers, got {weight!r}", {"weights": list(weights)})
        if any(a > b for a, b in zip(weights, weights[1:], strict=False)):
            raise WeightingError(f"Weights must be non-decreasing, got {list(weights)}", {"weights": list(weights)})

    @classmethod
    def trivial(cls, dimension: int) -> Weighting:
        return cls((1,) * dimension)

    @property
    def dimension(self) -> int:
        return len(self.weights)

    @property
    def min_weight(self) -> int:
        return self.weights[0]

    @property
    def max_weight(self) -> int:
        return self.weights[-1]

    @property
    def is_trivial(self) -> bool:
        return all(weight == 1 for weight in self.weights)

    def degree(self, alpha: Sequence[int]) -> int:
        return weighted_degree(alpha, self)

    def __iter__(self) -> Iterator[int]:
        return iter(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, axis: int) -> int:
        return self.weights[axis]


def weighted_degree(alpha: Sequence[int], weighting: Weighting) -> int:
    """Return <w, alpha>.

    Raises:
        AxisError: If the multi-index length differs from the weighting length.
    """
    if len(alpha) != len(weighting.weights):
        raise AxisError(
            f"Multi-index of length {len(alpha)} used with {len(weighting.weights)} weights",
            {"exponents": list(alpha), "weights": list(weighting.weights)},
        )
    return sum(a * w for a, w in zip(alpha, weighting.weights, strict=True))


@dataclass(frozen=True)
class SeriesContext:
    """Dimension, weighting and cutoff shared by arithmetic-compatible series."""

    dimension: int
    weighting: Weighting
    cutoff: int

    def __post_init__(self) -> None:
        if self.dimension != self.weighting.dimension:
            raise WeightingError(
                f"Weighting has {self.weighting.dimension} weights but dimension is {self.dimension}",
                {"dimension": self.dimension, "weights": list(self.weighting.weights)},
            )
        if self.cutoff < 0:
            raise WeightingError(f"Cutoff must be non-negative, got {self.cutoff}", {"cutoff": self.cutoff})

    @classmethod
    def create(cls, weights: Iterable[int], cutoff: int) -> SeriesContext:
        weighting = Weighting(tuple(weights))
        return cls(weighting.dimension, weighting, cutoff)

    def with_cutoff(self, cutoff: int) -> SeriesContext:
        return SeriesContext(self.dimension, self.weighting, cutoff)

    def padded(self, extra: int | None = None) -> SeriesContext:
        """Return the same context with the cutoff raised by ``extra`` (default ``w_n``)."""
        return self.with_cutoff(self.cutoff + (self.weighting.max_weight if extra is None else extra))

    def degree(self, alpha: Sequence[int]) -> int:
        return weighted_degree(alpha, self.weighting)

    def term_key(self, alpha: MultiIndex) -> tuple[int, tuple[int, ...]]:
        """Canonical monomial order: weighted degree, then lexicographically descending."""
        return self.degree(alpha), tuple(-a for a in alpha)

    def unit_vector(self, axis: int) -> MultiIndex:
        self.check_axis(axis)
        return tuple(1 if j == axis else 0 for j in range(self.dimension))

    def check_axis(self, axis: int) -> None:
        if not 0 <= axis < self.dimension:
            raise AxisError(f"Axis {axis} out of range for dimension {self.dimension}", {"axis": axis})


class TruncatedSeries:
    """Sparse exact power series truncated at the context's weighted cutoff.

    Instances are immutable; all arithmetic returns new series.
    """

    __slots__ = ("context", "_terms")

    def __init__(self, context: SeriesContext, terms: Mapping[Sequence[int], Scalar] | None = None):
        clean: dict[MultiIndex, Fraction] = {}
        for raw_alpha, raw_coefficient in (terms or {}).items():
            alpha = tuple(raw_alpha)
            if len(alpha) != context.dimension or any(a < 0 for a in alpha):
                raise AxisError(
                    f"Invalid multi-index {list(alpha)} for dimension {context.dimension}",
                    {"exponents": list(alpha)},
                )
            if context.degree(alpha) > context.cutoff:
                continue
            coefficient = clean.get(alpha, Fraction(0)) + Fraction(raw_coefficient)
            if coefficient:
                clean[alpha] = coefficient
            else:
                clean.pop(alpha, None)
        self.context = context
        self._terms = clean

    @classmethod
    def _from_clean(cls, context: SeriesContext, terms: dict[MultiIndex, Fraction]) -> TruncatedSeries:
        series = object.__new__(cls)
        series.context = context
        series._terms = terms
        return series

    @classmethod
    def zero(cls, context: SeriesContext) -> TruncatedSeries:
        return cls._from_clean(context, {})

    @classmethod
    def constant(cls, context: SeriesContext, value: Scalar) -> TruncatedSeries:
        return cls(context, {(0,) * context.dimension: value})

    @classmethod
    def one(cls, context: SeriesContext) -> TruncatedSeries:
        return cls.constant(context, 1)

    @classmethod
    def variable(cls, context: SeriesContext, axis: int) -> TruncatedSeries:
        return cls(context, {context.unit_vector(axis): 1})

    @classmethod
    def monomial(cls, context: SeriesContext, alpha: Sequence[int], coefficient: Scalar = 1) -> TruncatedSeries:
        return cls(context, {tuple(alpha): coefficient})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.context.dimension, Fraction(0))

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(alpha), Fraction(0))

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms in the canonical monomial order."""
        return sorted(self._terms.items(), key=lambda item: self.context.term_key(item[0]))

    def order(self) -> int | float:
        """Weighted order: minimal weighted degree of a stored term, ``INFINITY`` for zero."""
        if not self._terms:
            return INFINITY
        return min(self.context.degree(alpha) for alpha in self._terms)

    def homogeneous_part(self, degree: int) -> TruncatedSeries:
        """Terms of weighted degree exactly ``degree``."""
        return TruncatedSeries._from_clean(
            self.context, {a: c for a, c in self._terms.items() if self.context.degree(a) == degree}
        )

    def truncated(self, degree: int) -> TruncatedSeries:
        """Terms of weighted degree at most ``degree``, kept in the same context."""
        return TruncatedSeries._from_clean(
            self.context, {a: c for a, c in self._terms.items() if self.context.degree(a) <= degree}
        )

    def recast(self, context: SeriesContext) -> TruncatedSeries:
        """Reinterpret the stored polynomial in another context of the same dimension."""
        if context.dimension != self.context.dimension:
            raise ContextMismatchError(
                f"Cannot recast a series of dimension {self.context.dimension} to dimension {context.dimension}"
            )
        return TruncatedSeries(context, self._terms)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: TruncatedSeries) -> None:
        if other.context != self.context:
            raise ContextMismatchError(
                "Series contexts differ",
                {"left_cutoff": self.context.cutoff, "right_cutoff": other.context.cutoff},
            )

    def _coerce(self, other: object) -> TruncatedSeries | None:
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return TruncatedSeries.constant(self.context, other)
        return None

    def __add__(self, other: object) -> TruncatedSeries:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for alpha, coefficient in rhs._terms.items():
            total = terms.get(alpha, 0) + coefficient
            if total:
                terms[alpha] = total
            else:
                terms.pop(alpha, None)
        return TruncatedSeries._from_clean(self.context, terms)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries._from_clean(self.context, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other: object) -> TruncatedSeries:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> TruncatedSeries:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def scale(self, factor: Scalar) -> TruncatedSeries:
        factor = Fraction(factor)
        if not factor:
            return TruncatedSeries.zero(self.context)
        return TruncatedSeries._from_clean(self.context, {a: c * factor for a, c in self._terms.items()})

    def __mul__(self, other: object) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        ctx = self.context
        right = sorted(((ctx.degree(b), b, c) for b, c in other._terms.items()), key=lambda entry: entry[0])
        product: dict[MultiIndex, Fraction] = {}
        for a, ca in self._terms.items():
            room = ctx.cutoff - ctx.degree(a)
            for degree, b, cb in right:
                if degree > room:
                    break
                key = tuple(x + y for x, y in zip(a, b, strict=True))
                product[key] = product.get(key, 0) + ca * cb
        return TruncatedSeries._from_clean(ctx, {a: c for a, c in product.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return NotImplemented

    def __pow__(self, exponent: int) -> TruncatedSeries:
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = TruncatedSeries.one(self.context)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def partial_derivative(self, axis: int) -> TruncatedSeries:
        """Term-wise d/dx_axis; the context is unchanged."""
        self.context.check_axis(axis)
        terms: dict[MultiIndex, Fraction] = {}
        for alpha, coefficient in self._terms.items():
            if alpha[axis]:
                lowered = alpha[:axis] + (alpha[axis] - 1,) + alpha[axis + 1 :]
                terms[lowered] = coefficient * alpha[axis]
        return TruncatedSeries._from_clean(self.context, terms)

    def compose(self, substitution: Sequence[TruncatedSeries]) -> TruncatedSeries:
        """Return ``self(substitution[0], ..., substitution[n-1])`` modulo the cutoff.

        Raises:
            AxisError: If the tuple length differs from the dimension.
            ContextMismatchError: If a component lives in another context.
            NonzeroConstantTermError: If a component has a nonzero constant term.
        """
        subs = tuple(substitution)
        if len(subs) != self.context.dimension:
            raise AxisError(f"Substitution has {len(subs)} components, expected {self.context.dimension}")
        for axis, component in enumerate(subs):
            self._check(component)
            if component.constant_term:
                raise NonzeroConstantTermError(
                    f"Component {axis + 1} of the substitution has a nonzero constant term",
                    {"axis": axis, "constant": format_rational(component.constant_term)},
                )

        ctx = self.context
        orders = [component.order() for component in subs]
        powers: list[list[TruncatedSeries]] = [[TruncatedSeries.one(ctx)] for _ in subs]
        images: dict[MultiIndex, TruncatedSeries] = {(0,) * ctx.dimension: TruncatedSeries.one(ctx)}

        def power(axis: int, exponent: int) -> TruncatedSeries:
            cache = powers[axis]
            while len(cache) <= exponent:
                cache.append(cache[-1] * subs[axis])
            return cache[exponent]

        def image(alpha: MultiIndex) -> TruncatedSeries:
            cached = images.get(alpha)
            if cached is None:
                last = max(j for j, a in enumerate(alpha) if a)
                prefix = alpha[:last] + (0,) * (ctx.dimension - last)
                cached = image(prefix) * power(last, alpha[last])
                images[alpha] = cached
            return cached

        result: dict[MultiIndex, Fraction] = {}
        for alpha, coefficient in self._terms.items():
            lower_bound = sum(a * orders[j] for j, a in enumerate(alpha) if a)
            if lower_bound > ctx.cutoff:
                continue
            for beta, c in image(alpha)._terms.items():
                result[beta] = result.get(beta, 0) + coefficient * c
        return TruncatedSeries._from_clean(ctx, {a: c for a, c in result.items() if c})

    def reciprocal(self) -> TruncatedSeries:
        """Multiplicative inverse modulo the cutoff.

        Raises:
            NotInvertibleError: If the constant term is zero.
        """
        head = self.constant_term
        if not head:
            raise NotInvertibleError("Series with zero constant term is not invertible")
        # 1/f = (1/c) * sum g^k with g = 1 - f/c, and the order of g^k grows with k.
        tail = 1 - self.scale(1 / head)
        result = TruncatedSeries.one(self.context)
        term = result
        while True:
            term = term * tail
            if term.is_zero:
                break
            result = result + term
        return result.scale(1 / head)

    # -- protocol ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == TruncatedSeries.constant(self.context, other)._terms
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.context == other.context and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.context, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{list(a)}: {format_rational(c)}" for a, c in self.items())
        return f"TruncatedSeries(N={self.context.cutoff}, {{{body}}})"


def theta_w(series: TruncatedSeries) -> int | float:
    """Weighted order of a series (``INFINITY`` for the zero series)."""
    return series.order()
