import pytest

from conftest import random_admissible_field, random_series
from weightlin.algebra.base import ContextMismatchError, NotDiffeomorphismError
from weightlin.algebra.series import SeriesContext, TruncatedSeries
from weightlin.algebra.vectorfields import (
    FormalDiffeo,
    VectorField,
    compose_diffeo,
    invert_diffeo,
    is_formal_diffeo,
    jacobian,
    lie_bracket,
    pullback_function,
    pullback_vf,
)
from weightlin.algebra.weighting import euler_field
from weightlin.expressions import parse_field, parse_tuple


def diffeo(text: str, ctx: SeriesContext, names: str = "x,y") -> FormalDiffeo:
    return FormalDiffeo(ctx, parse_tuple(text, ctx, names.split(",")))


def random_near_identity(rng, ctx: SeriesContext) -> FormalDiffeo:
    """Identity plus random terms of degree above each coordinate's weight."""
    weights = ctx.weighting.weights
    return FormalDiffeo(
        ctx,
        [
            TruncatedSeries.variable(ctx, i) + random_series(rng, ctx, weights[i] + 1, terms=2)
            for i in range(ctx.dimension)
        ],
    )


class TestBracket:
    def test_euler_bracket_scales_monomials(self):
        ctx = SeriesContext.create((2, 3), 8)
        monomial = VectorField.monomial(ctx, 1, (1, 1))
        assert lie_bracket(euler_field(ctx), monomial) == monomial.scale(2)

    def test_bracket_components(self, field):
        x_field = field("y*d/dx", "x,y", (1, 1), 4)
        y_field = field("x^2*d/dy", "x,y", (1, 1), 4)
        expected = field("-x^2*d/dx + 2*x*y*d/dy", "x,y", (1, 1), 4)
        assert x_field.bracket(y_field) == expected

    def test_antisymmetry_and_jacobi(self, rng):
        for weights, cutoff in [((1, 1), 5), ((1, 2), 6), ((1, 1, 2), 4)]:
            ctx = SeriesContext.create(weights, cutoff)
            for _ in range(70):
                a, b, c = (random_admissible_field(rng, ctx) for _ in range(3))
                assert a.bracket(b) == -b.bracket(a)
                jacobi = a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b))
                assert jacobi.is_zero

    def test_derivation_rule(self, rng):
        ctx = SeriesContext.create((1, 2), 6)
        for _ in range(200):
            x = random_admissible_field(rng, ctx)
            f, g = random_series(rng, ctx), random_series(rng, ctx)
            assert x.apply(f * g) == x.apply(f) * g + f * x.apply(g)

    def test_context_mismatch(self, field):
        with pytest.raises(ContextMismatchError):
            field("x*d/dx", "x", (1,), 3).bracket(field("x*d/dx", "x", (1,), 4))


class TestDiffeomorphisms:
    def test_constant_term_is_rejected(self):
        ctx = SeriesContext.create((1, 1), 3)
        assert not is_formal_diffeo(parse_tuple("x + 1, y", ctx, ["x", "y"]))
        with pytest.raises(NotDiffeomorphismError):
            diffeo("x + 1, y", ctx)

    def test_singular_jacobian_is_rejected(self):
        ctx = SeriesContext.create((1, 1), 3)
        check = is_formal_diffeo(parse_tuple("x + y, 2*x + 2*y + x^2", ctx, ["x", "y"]))
        assert not check
        assert check.determinant == 0

    def test_jacobian(self):
        ctx = SeriesContext.create((1, 2), 6)
        names = ["x", "y"]
        matrix = jacobian(parse_tuple("x + y^2, x*y", ctx, names))
        expected = [["1", "2*y"], ["y", "x"]]
        assert matrix == [[parse_tuple(entry, ctx, names)[0] for entry in row] for row in expected]

    def test_composition_of_shears(self):
        ctx = SeriesContext.create((1, 2), 6)
        assert compose_diffeo(diffeo("x - y, y", ctx), diffeo("x + y, y", ctx)).is_identity

    def test_identity_is_neutral(self, rng):
        ctx = SeriesContext.create((1, 2), 6)
        phi = random_near_identity(rng, ctx)
        identity = FormalDiffeo.identity(ctx)
        assert compose_diffeo(identity, phi) == phi
        assert compose_diffeo(phi, identity) == phi

    def test_inverse(self, rng):
        ctx = SeriesContext.create((1, 2), 6)
        for _ in range(10):
            phi = random_near_identity(rng, ctx)
            psi = invert_diffeo(phi)
            assert compose_diffeo(phi, psi).is_identity
            assert compose_diffeo(psi, phi).is_identity

    def test_inverse_with_linear_part(self):
        ctx = SeriesContext.create((1, 1), 5)
        phi = diffeo("2*x + y + y^2, y - x^3", ctx)
        assert compose_diffeo(phi, invert_diffeo(phi)).is_identity


class TestPullback:
    def test_pullback_to_euler_field(self):
        ctx = SeriesContext.create((1, 2), 10)
        names = ["x", "y"]
        phi = diffeo("x + 1/3*y^2, y", ctx)
        pulled = pullback_vf(phi, parse_field("(x + y^2)*d/dx + 2*y*d/dy", ctx, names))
        assert pulled == euler_field(ctx)

    def test_pullback_by_identity(self, rng):
        ctx = SeriesContext.create((1, 2), 6)
        x = random_admissible_field(rng, ctx)
        assert pullback_vf(FormalDiffeo.identity(ctx), x) == x

    def test_pullback_of_functions(self, rng):
        ctx = SeriesContext.create((1, 2), 6)
        phi = random_near_identity(rng, ctx)
        assert pullback_function(phi, TruncatedSeries.variable(ctx, 1)) == phi[1]
        assert pullback_function(phi, TruncatedSeries.constant(ctx, 5)) == 5

    def test_pullback_is_compatible_with_function_pullback(self, rng):
        ctx = SeriesContext.create((1, 2), 5)
        padded = ctx.padded()
        for _ in range(10):
            phi = random_near_identity(rng, padded)
            x = random_admissible_field(rng, padded)
            f = random_series(rng, padded, 1)
            lhs = pullback_vf(phi, x).apply(pullback_function(phi, f))
            rhs = pullback_function(phi, x.apply(f))
            assert lhs.recast(ctx) == rhs.recast(ctx)

    def test_functoriality(self, rng):
        ctx = SeriesContext.create((1, 2), 5)
        padded = ctx.padded()
        for _ in range(10):
            phi = random_near_identity(rng, padded)
            psi = random_near_identity(rng, padded)
            x = random_admissible_field(rng, padded)
            lhs = pullback_vf(compose_diffeo(psi, phi), x)
            rhs = pullback_vf(phi, pullback_vf(psi, x))
            assert lhs.recast(ctx) == rhs.recast(ctx)

    def test_linear_pullback_of_five_variable_example(self):
        ctx = SeriesContext.create((1, 2, 2, 3, 3), 4)
        names = ["x", "y", "z", "u", "v"]
        field = parse_field(
            "x*d/dx + (4*y + z)*d/dy - 4*y*d/dz + (4*u - v)*d/du + (u + 2*v)*d/dv", ctx, names
        )
        phi = FormalDiffeo(ctx, parse_tuple("x, z, y - 2*z, v, -u + v", ctx, names))
        expected = parse_field("x*d/dx + 2*y*d/dy + (y + 2*z)*d/dz + 3*u*d/du + (u + 3*v)*d/dv", ctx, names)
        assert pullback_vf(phi, field) == expected
