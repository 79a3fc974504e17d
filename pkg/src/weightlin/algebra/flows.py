"""Time-dependent vector fields, formal isotopies and their flows.

Time dependence is always polynomial: a :class:`TimeVectorField` stores the
coefficients ``X_k`` of ``X_t = sum_k t^k X_k`` and an :class:`Isotopy` stores the
coordinate tuples ``phi_k`` of ``phi(t, x) = sum_k t^k phi_k(x)``. Products in ``t``
are truncated at an explicit ``t`` cap, playing the role the weighted cutoff plays
in ``x``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .base import (
    ContextMismatchError,
    FlowOrderError,
    NonEvaluativeError,
    NonzeroConstantTermError,
    NotDiffeomorphismError,
    NotInvertibleError,
)
from .linalg import determinant
from .series import MultiIndex, Scalar, SeriesContext, TruncatedSeries, format_rational
from .vectorfields import FormalDiffeo, VectorField, is_formal_diffeo, jacobian_at_zero, solve_series_system

__all__ = [
    "TimeSeries",
    "TimeVectorField",
    "Isotopy",
    "compose_time",
    "compose_time_series",
    "time_apply",
    "exponential_flow",
    "flow",
    "satisfies_flow_order_condition",
    "order_bound_holds",
    "evaluate_isotopy",
    "evaluate_time_vf",
    "isotopy_apply",
    "flow_property_defect",
    "function_flow_defect",
    "pullback_time_vf",
    "invert_isotopy",
    "compose_isotopies",
]

logger = logging.getLogger(__name__)


class TimeSeries:
    """Series in ``(t, x)``: coefficients ``c_0 .. c_cap`` of powers of ``t``."""

    __slots__ = ("context", "t_cap", "coefficients")

    def __init__(self, context: SeriesContext, coefficients: Sequence[TruncatedSeries], t_cap: int):
        kept = list(coefficients[: t_cap + 1])
        for coefficient in kept:
            if coefficient.context != context:
                raise ContextMismatchError("Time series coefficient lives in another context")
        while kept and kept[-1].is_zero:
            kept.pop()
        self.context = context
        self.t_cap = t_cap
        self.coefficients: tuple[TruncatedSeries, ...] = tuple(kept)

    @classmethod
    def constant_in_time(cls, series: TruncatedSeries, t_cap: int) -> TimeSeries:
        return cls(series.context, [series], t_cap)

    @classmethod
    def zero(cls, context: SeriesContext, t_cap: int) -> TimeSeries:
        return cls(context, [], t_cap)

    def coefficient(self, k: int) -> TruncatedSeries:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return TruncatedSeries.zero(self.context)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient(0).constant_term

    @property
    def x_order(self) -> int | float:
        return min((c.order() for c in self.coefficients), default=TruncatedSeries.zero(self.context).order())

    def _check(self, other: TimeSeries) -> None:
        if other.context != self.context or other.t_cap != self.t_cap:
            raise ContextMismatchError("Time series contexts or t caps differ")

    def __add__(self, other: TimeSeries) -> TimeSeries:
        self._check(other)
        size = max(len(self.coefficients), len(other.coefficients))
        return TimeSeries(self.context, [self.coefficient(k) + other.coefficient(k) for k in range(size)], self.t_cap)

    def __neg__(self) -> TimeSeries:
        return TimeSeries(self.context, [-c for c in self.coefficients], self.t_cap)

    def __sub__(self, other: TimeSeries) -> TimeSeries:
        return self + (-other)

    def scale(self, factor: Scalar) -> TimeSeries:
        return TimeSeries(self.context, [c.scale(factor) for c in self.coefficients], self.t_cap)

    def __mul__(self, other: TimeSeries) -> TimeSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        self._check(other)
        product = [TruncatedSeries.zero(self.context) for _ in range(self.t_cap + 1)]
        for a, left in enumerate(self.coefficients):
            if left.is_zero:
                continue
            for b, right in enumerate(other.coefficients[: self.t_cap + 1 - a]):
                if not right.is_zero:
                    product[a + b] = product[a + b] + left * right
        return TimeSeries(self.context, product, self.t_cap)

    def shift(self, k: int) -> TimeSeries:
        """Multiply by ``t^k``."""
        return TimeSeries(self.context, [TruncatedSeries.zero(self.context)] * k + list(self.coefficients), self.t_cap)

    def reciprocal(self) -> TimeSeries:
        """Inverse in ``(t, x)``; requires a nonzero constant term.

        Raises:
            NotInvertibleError: If the constant term vanishes.
        """
        head = self.constant_term
        if not head:
            raise NotInvertibleError("Time series with zero constant term is not invertible")
        one = TimeSeries.constant_in_time(TruncatedSeries.one(self.context), self.t_cap)
        tail = one - self.scale(1 / head)
        result = one
        term = one
        while True:
            term = term * tail
            if term.is_zero:
                break
            result = result + term
        return result.scale(1 / head)

    def partial_derivative(self, axis: int) -> TimeSeries:
        return TimeSeries(self.context, [c.partial_derivative(axis) for c in self.coefficients], self.t_cap)

    def time_derivative(self) -> TimeSeries:
        return TimeSeries(self.context, [c.scale(k) for k, c in enumerate(self.coefficients) if k], self.t_cap)

    def evaluate(self, tau: Scalar) -> TruncatedSeries:
        tau = Fraction(tau)
        result = TruncatedSeries.zero(self.context)
        for coefficient in reversed(self.coefficients):
            result = result.scale(tau) + coefficient
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.context == other.context and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.context, self.coefficients))

    def __repr__(self) -> str:
        return f"TimeSeries(cap={self.t_cap}, {list(self.coefficients)!r})"


def compose_time(function: TruncatedSeries, substitution: Sequence[TimeSeries]) -> TimeSeries:
    """Substitute a time-dependent tuple (zero constant terms) into a series in ``x``."""
    subs = tuple(substitution)
    ctx = function.context
    t_cap = subs[0].t_cap
    for component in subs:
        component._check(subs[0])
        if component.constant_term:
            raise NonzeroConstantTermError("Time-dependent substitution has a nonzero constant term")
    orders = [component.x_order for component in subs]
    one = TimeSeries.constant_in_time(TruncatedSeries.one(ctx), t_cap)
    powers: list[list[TimeSeries]] = [[one] for _ in subs]
    images: dict[MultiIndex, TimeSeries] = {(0,) * ctx.dimension: one}

    def power(axis: int, exponent: int) -> TimeSeries:
        cache = powers[axis]
        while len(cache) <= exponent:
            cache.append(cache[-1] * subs[axis])
        return cache[exponent]

    def image(alpha: MultiIndex) -> TimeSeries:
        cached = images.get(alpha)
        if cached is None:
            last = max(j for j, a in enumerate(alpha) if a)
            prefix = alpha[:last] + (0,) * (ctx.dimension - last)
            cached = image(prefix) * power(last, alpha[last])
            images[alpha] = cached
        return cached

    result = TimeSeries.zero(ctx, t_cap)
    for alpha, coefficient in function.terms.items():
        if sum(a * orders[j] for j, a in enumerate(alpha) if a) > ctx.cutoff:
            continue
        result = result + image(alpha).scale(coefficient)
    return result


@dataclass(frozen=True)
class TimeVectorField:
    """Time-dependent field ``X_t = sum_k t^k X_k`` with finite ``t`` support."""

    context: SeriesContext
    coefficients: tuple[VectorField, ...]

    def __post_init__(self) -> None:
        kept = list(self.coefficients)
        for field in kept:
            if field.context != self.context:
                raise ContextMismatchError("Time vector field coefficient lives in another context")
        while kept and kept[-1].is_zero:
            kept.pop()
        object.__setattr__(self, "coefficients", tuple(kept))

    @classmethod
    def constant(cls, field: VectorField) -> TimeVectorField:
        return cls(field.context, (field,))

    @classmethod
    def zero(cls, context: SeriesContext) -> TimeVectorField:
        return cls(context, ())

    @property
    def t_degree(self) -> int:
        """Highest nonzero ``t`` power, -1 for the zero field."""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, k: int) -> VectorField:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return VectorField.zero(self.context)

    def __iter__(self) -> Iterator[VectorField]:
        return iter(self.coefficients)

    def evaluate(self, tau: Scalar) -> VectorField:
        return evaluate_time_vf(self, tau)

    def derivative(self) -> TimeVectorField:
        """``d/dt`` of the family."""
        return TimeVectorField(self.context, tuple(field.scale(k) for k, field in enumerate(self.coefficients) if k))

    def __add__(self, other: TimeVectorField) -> TimeVectorField:
        size = max(len(self.coefficients), len(other.coefficients))
        return TimeVectorField(self.context, tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    def __neg__(self) -> TimeVectorField:
        return TimeVectorField(self.context, tuple(-field for field in self.coefficients))

    def __sub__(self, other: TimeVectorField) -> TimeVectorField:
        return self + (-other)

    def bracket(self, other: TimeVectorField) -> TimeVectorField:
        """Pointwise-in-time bracket ``[X_t, Y_t]``."""
        size = len(self.coefficients) + len(other.coefficients) - 1
        result = [VectorField.zero(self.context) for _ in range(max(size, 0))]
        for a, left in enumerate(self.coefficients):
            for b, right in enumerate(other.coefficients):
                result[a + b] = result[a + b] + left.bracket(right)
        return TimeVectorField(self.context, tuple(result))

    def components(self, t_cap: int) -> tuple[TimeSeries, ...]:
        """Component-wise view as time series truncated at ``t_cap``."""
        return tuple(
            TimeSeries(self.context, [field.components[i] for field in self.coefficients], t_cap)
            for i in range(self.context.dimension)
        )

    @classmethod
    def from_components(cls, context: SeriesContext, components: Sequence[TimeSeries]) -> TimeVectorField:
        size = max((len(c.coefficients) for c in components), default=0)
        return cls(
            context,
            tuple(VectorField(context, [c.coefficient(k) for c in components]) for k in range(size)),
        )


@dataclass(frozen=True)
class Isotopy:
    """Formal isotopy ``phi(t, x) = sum_k t^k phi_k(x)`` known up to its ``t`` cap.

    ``t_cap`` is the highest ``t`` power the isotopy was computed for and defaults to
    the highest stored one; trailing zero slices are not stored. ``exhausted`` records
    that every coefficient beyond the stored ones vanishes modulo the cutoff, which
    is what makes evaluation at ``t != 0`` legal.
    """

    context: SeriesContext
    coefficients: tuple[tuple[TruncatedSeries, ...], ...]
    exhausted: bool = False
    t_cap: int = -1

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise NotDiffeomorphismError("An isotopy needs its time-zero slice")
        cap = len(self.coefficients) - 1 if self.t_cap < 0 else self.t_cap
        kept = list(self.coefficients[: cap + 1])
        while len(kept) > 1 and all(component.is_zero for component in kept[-1]):
            kept.pop()
        object.__setattr__(self, "coefficients", tuple(kept))
        object.__setattr__(self, "t_cap", cap)
        check = is_formal_diffeo(self.coefficients[0])
        if not check:
            raise NotDiffeomorphismError(f"Time-zero slice is not a diffeomorphism: {check.reason}")

    @classmethod
    def identity(cls, context: SeriesContext) -> Isotopy:
        return cls(context, (FormalDiffeo.identity(context).components,), exhausted=True)

    @property
    def t_degree(self) -> int:
        """Highest stored ``t`` power; the ``t`` degree when exhausted."""
        return len(self.coefficients) - 1

    @property
    def is_identity(self) -> bool:
        return self.t_degree == 0 and self.time_zero().is_identity

    def coefficient(self, k: int) -> tuple[TruncatedSeries, ...]:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return tuple(TruncatedSeries.zero(self.context) for _ in range(self.context.dimension))

    def time_zero(self) -> FormalDiffeo:
        return FormalDiffeo(self.context, self.coefficients[0])

    def components(self, t_cap: int | None = None) -> tuple[TimeSeries, ...]:
        cap = self.t_cap if t_cap is None else t_cap
        return tuple(
            TimeSeries(self.context, [tuple_[i] for tuple_ in self.coefficients], cap)
            for i in range(self.context.dimension)
        )

    def component_degrees(self) -> list[int]:
        """Highest stored ``t`` power of each component."""
        return [
            max((k for k, tuple_ in enumerate(self.coefficients) if not tuple_[i].is_zero), default=0)
            for i in range(self.context.dimension)
        ]

    @classmethod
    def from_components(cls, context: SeriesContext, components: Sequence[TimeSeries], exhausted: bool) -> Isotopy:
        cap = components[0].t_cap
        return cls(
            context,
            tuple(tuple(c.coefficient(k) for c in components) for k in range(cap + 1)),
            exhausted,
            cap,
        )

    def jacobian_determinants(self, points: Sequence[Scalar]) -> list[Fraction]:
        """``det D_x phi(tau, 0)`` at each ``tau`` of ``points``."""
        values = []
        for tau in points:
            tau = Fraction(tau)
            matrix = [[Fraction(0)] * self.context.dimension for _ in range(self.context.dimension)]
            for k, tuple_ in enumerate(self.coefficients):
                for i, row in enumerate(jacobian_at_zero(tuple_)):
                    for j, entry in enumerate(row):
                        matrix[i][j] += tau**k * entry
            values.append(determinant(matrix))
        return values


def time_apply(field: TimeVectorField, function: TruncatedSeries, t_cap: int) -> TimeSeries:
    """``X_t(f)`` as a time series."""
    return TimeSeries(function.context, [coefficient.apply(function) for coefficient in field.coefficients], t_cap)


def _time_field_on(field: TimeVectorField, phi: Sequence[TimeSeries]) -> list[TimeSeries]:
    """Components of ``X_t(phi_t)``, i.e. ``sum_k t^k X_k^i(phi_t)``."""
    t_cap = phi[0].t_cap
    values = [TimeSeries.zero(field.context, t_cap) for _ in range(field.context.dimension)]
    for k, coefficient in enumerate(field.coefficients):
        if k > t_cap:
            break
        for i, component in enumerate(coefficient.components):
            if not component.is_zero:
                values[i] = values[i] + compose_time(component, phi).shift(k)
    return values


def satisfies_flow_order_condition(field: TimeVectorField) -> bool:
    """Whether every ``X_k`` lies in the filtration level ``k + 1`` of vector fields.

    Under this condition the flow coefficients satisfy ``ord_w(phi_k^i) >= w_i + k``.
    """
    weights = field.context.weighting.weights
    for k, coefficient in enumerate(field.coefficients):
        for axis, alpha, _ in coefficient.terms():
            if field.context.degree(alpha) - weights[axis] < k + 1:
                return False
    return True


def order_bound_holds(coefficients: Sequence[Sequence[TruncatedSeries]], context: SeriesContext) -> bool:
    """Check ``ord_w(phi_k^i) >= w_i + k`` for every stored coefficient."""
    weights = context.weighting.weights
    return all(
        component.order() >= weights[i] + k
        for k, tuple_ in enumerate(coefficients)
        for i, component in enumerate(tuple_)
    )


def exponential_flow(field: VectorField, t_cap: int) -> Isotopy:
    """Flow of a time-independent field: ``phi_k = X^k(x) / k!``.

    Once a coefficient vanishes all later ones vanish too, and the isotopy is marked
    exhausted.
    """
    ctx = field.context
    current = FormalDiffeo.identity(ctx).components
    coefficients = [current]
    exhausted = field.is_zero
    for k in range(1, t_cap + 1):
        current = tuple(field.apply(component).scale(Fraction(1, k)) for component in current)
        if all(component.is_zero for component in current):
            exhausted = True
            break
        coefficients.append(current)
    if not exhausted and satisfies_flow_order_condition(TimeVectorField.constant(field)):
        exhausted = t_cap >= ctx.cutoff - ctx.weighting.min_weight
    logger.debug("Exponential flow: %d coefficients, exhausted=%s", len(coefficients), exhausted)
    return Isotopy(ctx, tuple(coefficients), exhausted, t_cap)


def flow(field: TimeVectorField, t_cap: int | None = None) -> Isotopy:
    """Unique isotopy with ``d/dt phi_t(x^i) = phi_t(X_t(x^i))`` and ``phi_0 = id``.

    Coefficients follow ``(m + 1) phi_{m+1} = [t^m] X_t(phi_t)``. When the field
    satisfies the weighted order condition the bound ``ord_w(phi_k^i) >= w_i + k`` is
    enforced and the isotopy is exhausted once ``k`` passes ``N - w_1``.

    Args:
        field: The time-dependent generator.
        t_cap: Highest ``t`` power to compute. Defaults to ``N - w_1`` for fields
            satisfying the order condition and to ``N`` otherwise.

    Raises:
        FlowOrderError: If a computed coefficient violates the weighted order bound.
    """
    ctx = field.context
    bounded = satisfies_flow_order_condition(field)
    natural_cap = max(ctx.cutoff - ctx.weighting.min_weight, 0)
    cap = (natural_cap if bounded else ctx.cutoff) if t_cap is None else t_cap
    steps = min(cap, natural_cap) if bounded else cap
    coefficients: list[tuple[TruncatedSeries, ...]] = [FormalDiffeo.identity(ctx).components]
    exhausted = field.is_zero
    for m in range(steps):
        if exhausted:
            break
        phi = Isotopy(ctx, tuple(coefficients)).components(m)
        values = _time_field_on(field, phi)
        following = tuple(value.coefficient(m).scale(Fraction(1, m + 1)) for value in values)
        if bounded and any(
            component.order() < ctx.weighting.weights[i] + m + 1 for i, component in enumerate(following)
        ):
            raise FlowOrderError(
                f"Flow coefficient {m + 1} violates the weighted order bound",
                {"t_power": m + 1},
            )
        coefficients.append(following)
        if field.t_degree == 0 and all(component.is_zero for component in following):
            exhausted = True
    if bounded and cap >= natural_cap:
        exhausted = True
    logger.debug("Flow: %d coefficients, bounded=%s, exhausted=%s", len(coefficients), bounded, exhausted)
    return Isotopy(ctx, tuple(coefficients), exhausted, cap)


def evaluate_isotopy(isotopy: Isotopy, tau: Scalar, *, order_bound: bool = False) -> FormalDiffeo:
    """Substitute ``t = tau`` into an isotopy.

    Args:
        isotopy: The isotopy to evaluate.
        tau: Time value.
        order_bound: Caller asserts the weighted order bound for the isotopy; it is
            checked on the stored coefficients and must cover ``t`` powers up to ``N - w_1``.

    Raises:
        NonEvaluativeError: If ``tau != 0`` and no evaluability certificate is available.
        NotDiffeomorphismError: If the evaluated tuple is not a diffeomorphism.
    """
    tau = Fraction(tau)
    ctx = isotopy.context
    if not tau:
        return isotopy.time_zero()
    if not isotopy.exhausted:
        covered = isotopy.t_cap >= ctx.cutoff - ctx.weighting.min_weight
        if not (order_bound and covered and order_bound_holds(isotopy.coefficients, ctx)):
            raise NonEvaluativeError(
                f"Isotopy is not evaluative at t = {format_rational(tau)}: "
                f"coefficients do not vanish up to t^{isotopy.t_cap}",
                {"t_cap": isotopy.t_cap, "tau": format_rational(tau)},
            )
    components = [
        TimeSeries(ctx, [tuple_[i] for tuple_ in isotopy.coefficients], isotopy.t_cap).evaluate(tau)
        for i in range(ctx.dimension)
    ]
    return FormalDiffeo(ctx, components)


def evaluate_time_vf(field: TimeVectorField, tau: Scalar) -> VectorField:
    """``sum_k tau^k X_k``."""
    tau = Fraction(tau)
    result = VectorField.zero(field.context)
    for coefficient in reversed(field.coefficients):
        result = result.scale(tau) + coefficient
    return result


def _substitution_degree(functions: Sequence[TimeSeries], inner: Isotopy) -> int:
    """Bound on the ``t`` degree of ``f(inner_t)`` for polynomial ``f`` and an exhausted ``inner``."""
    degrees = inner.component_degrees()
    bound = 0
    for function in functions:
        for k, coefficient in enumerate(function.coefficients):
            for alpha in coefficient.terms:
                bound = max(bound, k + sum(a * d for a, d in zip(alpha, degrees, strict=True)))
    return bound


def isotopy_apply(isotopy: Isotopy, function: TruncatedSeries | TimeSeries) -> TimeSeries:
    """``phi_t(f)``: the isotopy acting on a (possibly time-dependent) function.

    The result is exact through the smallest ``t`` cap among a time-dependent ``f`` and
    a non-exhausted isotopy. An exhausted isotopy applied to a series in ``x`` gives a
    polynomial in ``t`` and is returned in full.
    """
    ctx = isotopy.context
    series = TimeSeries.constant_in_time(function, 0) if isinstance(function, TruncatedSeries) else function
    caps = [] if isinstance(function, TruncatedSeries) else [function.t_cap]
    if not isotopy.exhausted:
        caps.append(isotopy.t_cap)
    cap = min(caps) if caps else max(isotopy.t_cap, _substitution_degree([series], isotopy))
    return compose_time_series(TimeSeries(ctx, series.coefficients, cap), isotopy.components(cap))


def flow_property_defect(isotopy: Isotopy, field: TimeVectorField) -> list[tuple[TruncatedSeries, ...]]:
    """Coefficients ``(m + 1) phi_{m+1} - [t^m] X_t(phi_t)`` for ``m < K``; all zero for a flow."""
    phi = isotopy.components()
    values = _time_field_on(field, phi)
    return [
        tuple(
            isotopy.coefficient(m + 1)[i].scale(m + 1) - values[i].coefficient(m)
            for i in range(isotopy.context.dimension)
        )
        for m in range(isotopy.t_cap)
    ]


def function_flow_defect(isotopy: Isotopy, field: TimeVectorField, function: TruncatedSeries) -> list[TruncatedSeries]:
    """Coefficients of ``d/dt phi_t(f) - phi_t(X_t(f))`` below the ``t`` cap."""
    cap = isotopy.t_cap
    lhs = isotopy_apply(isotopy, function).time_derivative()
    rhs = isotopy_apply(isotopy, time_apply(field, function, cap))
    return [lhs.coefficient(m) - rhs.coefficient(m) for m in range(cap)]


def pullback_time_vf(isotopy: Isotopy, field: TimeVectorField, t_cap: int | None = None) -> TimeVectorField:
    """``phi_t^* X_t = D_x phi_t^{-1} [X_t(phi_t)]`` as a time series up to ``t_cap``."""
    cap = isotopy.t_cap if t_cap is None else t_cap
    phi = isotopy.components(cap)
    matrix = [[component.partial_derivative(j) for j in range(len(phi))] for component in phi]
    pushed = _time_field_on(field, phi)
    return TimeVectorField.from_components(isotopy.context, solve_series_system(matrix, pushed))


def invert_isotopy(isotopy: Isotopy) -> Isotopy:
    """``t``-coefficientwise inverse: ``psi_t`` with ``phi_t(psi_t) = id``.

    A truncated isotopy is inverted up to its ``t`` cap. For an exhausted one the
    inverse is computed far enough to cover its ``t`` degree when it is polynomial in
    ``t``, and is marked exhausted only once ``phi_t(psi_t) = id`` holds exactly.

    Raises:
        NotInvertibleError: If the fixed-point iteration does not reach an inverse.
    """
    ctx = isotopy.context
    cap = isotopy.t_cap
    if isotopy.exhausted:
        cap = max(cap, ctx.cutoff - ctx.weighting.min_weight)
        if all(not any(any(row) for row in jacobian_at_zero(tuple_)) for tuple_ in isotopy.coefficients[1:]):
            total_degree = ctx.cutoff // ctx.weighting.min_weight
            cap = max(cap, isotopy.t_degree * (total_degree - 1))
    size = ctx.dimension
    phi = isotopy.components(cap)
    coordinates = [TimeSeries.constant_in_time(TruncatedSeries.variable(ctx, i), cap) for i in range(size)]
    # Linear part in x, with coefficients polynomial in t.
    unit_vectors = [ctx.unit_vector(j) for j in range(size)]
    linear = [
        [
            TimeSeries(
                ctx,
                [TruncatedSeries.constant(ctx, c.coefficient(unit_vectors[j])) for c in comp.coefficients],
                cap,
            )
            for j in range(size)
        ]
        for comp in phi
    ]
    nonlinear = []
    for i, component in enumerate(phi):
        linear_part = TimeSeries.zero(ctx, cap)
        for j in range(size):
            linear_part = linear_part + linear[i][j] * coordinates[j]
        nonlinear.append(component - linear_part)

    candidate = solve_series_system(linear, coordinates)
    for _ in range(ctx.cutoff + cap + 2):
        corrected = solve_series_system(
            linear,
            [coordinates[i] - compose_time_series(nonlinear[i], candidate) for i in range(size)],
        )
        if corrected == candidate:
            break
        candidate = corrected
    for i in range(size):
        if compose_time_series(phi[i], candidate) != coordinates[i]:
            raise NotInvertibleError("Isotopy inversion did not converge modulo the cutoffs")
    inverse = Isotopy.from_components(ctx, candidate, False)
    if isotopy.exhausted:
        polynomial = Isotopy(ctx, inverse.coefficients, True, cap)
        if compose_isotopies(isotopy, polynomial).is_identity:
            return polynomial
    return inverse


def compose_time_series(function: TimeSeries, substitution: Sequence[TimeSeries]) -> TimeSeries:
    """``sum_k t^k f_k(psi_t)`` for a time-dependent ``f``."""
    result = TimeSeries.zero(function.context, function.t_cap)
    for k, coefficient in enumerate(function.coefficients):
        if not coefficient.is_zero:
            result = result + compose_time(coefficient, substitution).shift(k)
    return result


def compose_isotopies(outer: Isotopy, inner: Isotopy) -> Isotopy:
    """Isotopy with components ``outer_t^i(inner_t)``.

    Two exhausted isotopies compose to a polynomial in ``t``, computed up to a bound on
    its ``t`` degree. Otherwise the result is exact through the smallest cap of a
    truncated factor.
    """
    if outer.context != inner.context:
        raise ContextMismatchError("Isotopy contexts differ")
    exhausted = outer.exhausted and inner.exhausted
    if exhausted:
        cap = max(outer.t_cap, inner.t_cap, _substitution_degree(outer.components(), inner))
    else:
        cap = min(isotopy.t_cap for isotopy in (outer, inner) if not isotopy.exhausted)
    substitution = inner.components(cap)
    components = [compose_time_series(component, substitution) for component in outer.components(cap)]
    return Isotopy.from_components(outer.context, components, exhausted)
