from fractions import Fraction

import pytest

from weightlin.algebra.base import NonEvaluativeError
from weightlin.algebra.flows import (
    Isotopy,
    TimeVectorField,
    compose_isotopies,
    evaluate_isotopy,
    evaluate_time_vf,
    exponential_flow,
    flow,
    flow_property_defect,
    function_flow_defect,
    invert_isotopy,
    isotopy_apply,
    pullback_time_vf,
    satisfies_flow_order_condition,
)
from weightlin.algebra.series import SeriesContext, TruncatedSeries
from weightlin.algebra.vectorfields import FormalDiffeo, VectorField, compose_diffeo, pullback_vf
from weightlin.expressions import parse_field, parse_series, parse_time_field

ORDERED_FIELD = "(y + x^2 + t*x*y)*d/dx + x^3*d/dy"


@pytest.fixture
def ctx() -> SeriesContext:
    return SeriesContext.create((1, 2), 6)


def is_identity_isotopy(isotopy: Isotopy) -> bool:
    ctx = isotopy.context
    identity = FormalDiffeo.identity(ctx).components
    zero = TruncatedSeries.zero(ctx)
    return isotopy.coefficient(0) == identity and all(
        all(component == zero for component in isotopy.coefficient(k)) for k in range(1, isotopy.t_cap + 1)
    )


class TestExponentialFlow:
    def test_coefficients_of_quadratic_field(self, field):
        x_squared = field("x^2*d/dx", "x", (1,), 6)
        ctx = x_squared.context
        isotopy = exponential_flow(x_squared, 10)
        for k in range(6):
            assert isotopy.coefficient(k) == (TruncatedSeries.monomial(ctx, (k + 1,)),)
        assert isotopy.exhausted

    def test_exhaustion_needs_enough_t_powers(self, field):
        x_squared = field("x^2*d/dx", "x", (1,), 6)
        assert not exponential_flow(x_squared, 3).exhausted
        assert exponential_flow(x_squared, 5).exhausted

    def test_nilpotent_field_evaluates(self, field):
        shear = field("y*d/dx", "x,y", (1, 1), 4)
        ctx = shear.context
        isotopy = exponential_flow(shear, 4)
        assert isotopy.exhausted
        phi = evaluate_isotopy(isotopy, 1)
        x, y = TruncatedSeries.variable(ctx, 0), TruncatedSeries.variable(ctx, 1)
        assert phi.components == (x + y, y)

    def test_euler_field_is_not_evaluative(self, field):
        euler = field("x*d/dx", "x", (1,), 4)
        isotopy = exponential_flow(euler, 3)
        assert not isotopy.exhausted
        with pytest.raises(NonEvaluativeError):
            evaluate_isotopy(isotopy, 1)
        with pytest.raises(NonEvaluativeError):
            evaluate_isotopy(isotopy, 1, order_bound=True)

    def test_time_zero_is_always_available(self, field):
        isotopy = exponential_flow(field("x*d/dx", "x", (1,), 4), 3)
        assert evaluate_isotopy(isotopy, 0).is_identity


class TestFlow:
    def test_time_dependent_shear(self):
        ctx = SeriesContext.create((1, 1), 4)
        shear = parse_field("y*d/dx", ctx, ["x", "y"])
        isotopy = flow(TimeVectorField(ctx, (VectorField.zero(ctx), shear)))
        y = TruncatedSeries.variable(ctx, 1)
        assert isotopy.coefficient(2) == (y / 2, TruncatedSeries.zero(ctx))
        assert not isotopy.exhausted

    def test_order_condition(self, ctx):
        names = ["x", "y"]
        assert satisfies_flow_order_condition(parse_time_field(ORDERED_FIELD, ctx, names))
        assert not satisfies_flow_order_condition(parse_time_field("x*d/dx", ctx, names))
        assert not satisfies_flow_order_condition(parse_time_field("t*y*d/dx", ctx, names))

    def test_bounded_flow_is_exhausted(self, ctx):
        isotopy = flow(parse_time_field(ORDERED_FIELD, ctx, ["x", "y"]))
        assert isotopy.exhausted
        assert isotopy.t_cap <= ctx.cutoff - 1
        assert not evaluate_isotopy(isotopy, 1).is_identity

    def test_short_t_cap_is_not_evaluative(self, ctx):
        isotopy = flow(parse_time_field(ORDERED_FIELD, ctx, ["x", "y"]), t_cap=2)
        assert not isotopy.exhausted
        with pytest.raises(NonEvaluativeError):
            evaluate_isotopy(isotopy, 1)

    def test_flow_equations_hold(self, ctx):
        names = ["x", "y"]
        generator = parse_time_field(ORDERED_FIELD, ctx, names)
        isotopy = flow(generator)
        for defect in flow_property_defect(isotopy, generator):
            assert all(component.is_zero for component in defect)
        function = parse_series("x*y + y^2 - 3*x^2", ctx, names)
        assert all(value.is_zero for value in function_flow_defect(isotopy, generator, function))

    def test_constant_field_matches_exponential_flow(self, ctx):
        generator = parse_field("(y + x^2)*d/dx + x^3*d/dy", ctx, ["x", "y"])
        assert flow(TimeVectorField.constant(generator)).coefficients == exponential_flow(generator, 5).coefficients

    def test_bounded_flow_keeps_its_linear_determinant(self, ctx):
        isotopy = flow(parse_time_field(ORDERED_FIELD, ctx, ["x", "y"]))
        assert isotopy.jacobian_determinants([0, 1, 2, Fraction(-1, 2)]) == [1, 1, 1, 1]

    def test_euler_flow_determinant_depends_on_time(self, field):
        isotopy = exponential_flow(field("x*d/dx", "x", (1,), 4), 3)
        assert isotopy.jacobian_determinants([0, 1]) == [1, Fraction(8, 3)]

    def test_inverse_and_composition(self, ctx):
        isotopy = flow(parse_time_field(ORDERED_FIELD, ctx, ["x", "y"]))
        inverse = invert_isotopy(isotopy)
        assert is_identity_isotopy(compose_isotopies(isotopy, inverse))
        assert is_identity_isotopy(compose_isotopies(inverse, isotopy))


class TestTimeVectorField:
    def test_evaluate(self, ctx):
        shear = parse_field("y*d/dx", ctx, ["x", "y"])
        family = TimeVectorField(ctx, (VectorField.zero(ctx), shear))
        assert evaluate_time_vf(family, 2) == shear.scale(2)
        assert family.evaluate(0).is_zero

    def test_derivative_drops_constant_part(self, ctx):
        family = parse_time_field("x*d/dx + t^2*y*d/dy", ctx, ["x", "y"])
        assert family.derivative() == parse_time_field("2*t*y*d/dy", ctx, ["x", "y"])


class TestIsotopyActions:
    def test_function_is_transported(self):
        ctx = SeriesContext.create((1, 1), 4)
        isotopy = exponential_flow(parse_field("y*d/dx", ctx, ["x", "y"]), 4)
        moved = isotopy_apply(isotopy, parse_series("x^2", ctx, ["x", "y"]))
        assert moved.evaluate(2) == parse_series("x^2 + 4*x*y + 4*y^2", ctx, ["x", "y"])

    @pytest.mark.parametrize("tau", [0, 1, 2, -3])
    def test_evaluation_commutes_with_pullback(self, tau):
        ctx = SeriesContext.create((1, 1), 4)
        names = ["x", "y"]
        isotopy = exponential_flow(parse_field("y*d/dx", ctx, names), 4)
        family = parse_time_field("t*y*d/dx + x^2*d/dy", ctx, names)
        pulled = pullback_time_vf(isotopy, family, t_cap=4)
        expected = pullback_vf(evaluate_isotopy(isotopy, tau), family.evaluate(tau))
        assert pulled.evaluate(tau).recast(ctx) == expected.recast(ctx)

    def test_cap_is_kept_apart_from_stored_coefficients(self):
        ctx = SeriesContext.create((1, 1), 4)
        isotopy = exponential_flow(parse_field("y*d/dx", ctx, ["x", "y"]), 4)
        assert isotopy.t_degree == 1
        assert isotopy.t_cap == 4
        assert Isotopy(ctx, isotopy.coefficients).t_cap == 1

    @pytest.mark.parametrize("tau", [1, 2, -1])
    def test_composed_flows_evaluate_like_composed_diffeomorphisms(self, tau):
        ctx = SeriesContext.create((1, 1), 6)
        names = ["x", "y"]
        outer = exponential_flow(parse_field("y^2*d/dx", ctx, names), 6)
        inner = exponential_flow(parse_field("x*y*d/dy", ctx, names), 6)
        assert outer.exhausted and inner.exhausted
        composed = compose_isotopies(outer, inner)
        assert composed.exhausted
        expected = compose_diffeo(evaluate_isotopy(outer, tau), evaluate_isotopy(inner, tau))
        assert evaluate_isotopy(composed, tau) == expected

    def test_exhausted_inverse_evaluates(self):
        ctx = SeriesContext.create((1, 1), 6)
        isotopy = exponential_flow(parse_field("x*y*d/dy", ctx, ["x", "y"]), 6)
        inverse = invert_isotopy(isotopy)
        assert inverse.exhausted
        assert compose_diffeo(evaluate_isotopy(isotopy, 2), evaluate_isotopy(inverse, 2)).is_identity

    def test_truncated_factor_limits_the_composition(self, ctx):
        names = ["x", "y"]
        truncated = flow(parse_time_field(ORDERED_FIELD, ctx, names), t_cap=2)
        composed = compose_isotopies(exponential_flow(parse_field("y*d/dx", ctx, names), 6), truncated)
        assert not composed.exhausted
        assert composed.t_cap == 2
