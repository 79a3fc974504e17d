from fractions import Fraction

import pytest

from conftest import random_admissible_field
from weightlin.algebra.base import NotAdmissibleError, NotEulerLikeError, SingularAdjointError, WeightlinError
from weightlin.algebra.flows import TimeVectorField
from weightlin.algebra.linalg import bareiss_determinant
from weightlin.algebra.normal_form import (
    adjoint_matrix,
    certify_degree,
    certify_degrees,
    euler_like_linearize,
    is_adjoint_invertible,
    iterative_linearize_oracle,
    linearize,
    lie_series,
    moser_equation_defect,
    moser_linearize,
    solve_homological,
    verify_linearization,
)
from weightlin.algebra.series import SeriesContext
from weightlin.algebra.spectral import enumerate_resonances
from weightlin.algebra.vectorfields import FormalDiffeo, VectorField, compose_diffeo, pullback_vf
from weightlin.algebra.weighting import euler_field, graded_component_vf, is_weighted_euler_like, slice_dimension
from weightlin.expressions import format_series, parse_field, parse_tuple

EULER_LIKE = "(x + y^2)*d/dx + 2*y*d/dy"
NON_EULER = "(x + y^2)*d/dx + (7/3*y + x*y)*d/dy"


def expressions(phi: FormalDiffeo, names: str = "x,y") -> list[str]:
    return [format_series(component, names.split(",")) for component in phi]


class TestEulerLike:
    def test_shear(self, field):
        result = linearize(field("(x + y)*d/dx + 2*y*d/dy", "x,y", (1, 2), 6))
        assert result.method == "euler"
        assert result.verified
        assert expressions(result.phi) == ["x + y", "y"]
        assert expressions(result.phi_inverse) == ["x - y", "y"]

    def test_quadratic_correction(self, field):
        result = linearize(field(EULER_LIKE, "x,y", (1, 2), 10))
        assert result.verified
        assert result.residual.is_zero
        assert expressions(result.phi) == ["x + 1/3*y^2", "y"]
        assert expressions(result.phi_inverse) == ["x - 1/3*y^2", "y"]
        assert result.linear_part == euler_field(result.linear_part.context)
        assert set(result.generator_slices) == {3}

    def test_certificates_in_closed_form(self, field):
        result = euler_like_linearize(field(EULER_LIKE, "x,y", (1, 2), 6))
        weighting = result.linear_part.context.weighting
        for certificate in result.certificates:
            k = certificate.degree
            assert certificate.invertible
            assert certificate.dimension == slice_dimension(weighting, k)
            assert certificate.determinant == Fraction(k) ** certificate.dimension

    def test_matches_general_pipeline(self, field):
        x = field(EULER_LIKE, "x,y", (1, 2), 8)
        assert moser_linearize(x).phi == euler_like_linearize(x).phi

    def test_alias(self, field):
        assert linearize(field(EULER_LIKE, "x,y", (1, 2), 6), method="euler-like").method == "euler"

    def test_rejects_other_fields(self, field):
        with pytest.raises(NotEulerLikeError):
            linearize(field(NON_EULER, "x,y", (1, 2), 6), method="euler")

    def test_random_non_euler_like_fields_are_rejected(self, rng):
        ctx = SeriesContext.create((1, 2), 5)
        x0 = parse_field("x*d/dx + 7/3*y*d/dy", ctx, ["x", "y"])
        for _ in range(20):
            x = x0 + random_admissible_field(rng, ctx, min_slice=1)
            assert not is_weighted_euler_like(x)
            with pytest.raises(NotEulerLikeError):
                euler_like_linearize(x)

    def test_linear_field_needs_no_change_of_coordinates(self, field):
        result = linearize(field("x*d/dx + 2*y*d/dy", "x,y", (1, 2), 6))
        assert result.phi.is_identity
        assert result.generator is None


class TestMoser:
    def test_non_euler_field(self, field):
        x = field(NON_EULER, "x,y", (1, 2), 6)
        result = linearize(x)
        assert result.method == "moser"
        assert result.verified
        assert pullback_vf(result.phi.recast(x.context), x).recast(x.context) == graded_component_vf(x, 0)
        assert compose_diffeo(result.phi, result.phi_inverse).is_identity

    def test_generator_solves_moser_equation(self, field):
        result = moser_linearize(field(NON_EULER, "x,y", (1, 2), 6))
        kappa = TimeVectorField(result.generator.context, result.slices)
        defect = moser_equation_defect(kappa, result.generator)
        assert all(defect.coefficient(k).is_zero for k in range(len(result.slices) - 1))

    def test_homological_equation(self, field):
        slices = moser_linearize(field(NON_EULER, "x,y", (1, 2), 6)).slices
        first = solve_homological(slices, 0, [])
        assert slices[0].bracket(first) == slices[1]

    def test_random_fields_agree_with_oracle(self, rng):
        ctx = SeriesContext.create((1, 2), 5)
        x0 = parse_field("x*d/dx + 7/3*y*d/dy", ctx, ["x", "y"])
        for _ in range(10):
            x = x0 + random_admissible_field(rng, ctx, min_slice=1)
            moser = linearize(x)
            oracle = linearize(x, method="oracle")
            assert moser.verified
            assert oracle.verified
            assert verify_linearization(x, oracle.phi)[1]

    @pytest.mark.parametrize(
        ("weights", "linear"),
        [
            ((1, 2), "x*d/dx + 2*y*d/dy"),
            ((1, 2, 2), "x*d/dx + 2*y*d/dy + (y + 2*z)*d/dz"),
        ],
    )
    def test_weight_spectrum_fields_agree_with_oracle(self, rng, weights, linear):
        ctx = SeriesContext.create(weights, 6)
        x0 = parse_field(linear, ctx, ["x", "y", "z"][: len(weights)])
        for _ in range(25):
            x = x0 + random_admissible_field(rng, ctx, min_slice=1, terms=2)
            result = linearize(x)
            oracle = linearize(x, method="oracle")
            assert result.verified
            assert oracle.verified
            assert verify_linearization(x, oracle.phi)[1]

    def test_five_variable_jordan_field(self):
        ctx = SeriesContext.create((1, 2, 2, 3, 3), 5)
        x = parse_field(
            "(x + x*y)*d/dx + 2*y*d/dy + (y + 2*z + x^2*y)*d/dz + (3*u + y^2)*d/du + (u + 3*v)*d/dv",
            ctx,
            ["x", "y", "z", "u", "v"],
        )
        result = linearize(x)
        assert result.method == "moser"
        assert result.verified

    def test_threads_do_not_change_certificates(self, field):
        x0 = graded_component_vf(field(NON_EULER, "x,y", (1, 2), 8), 0)
        assert certify_degrees(x0, range(1, 7), threads=2) == certify_degrees(x0, range(1, 7), threads=1)


class TestFailures:
    def test_resonant_trivial_weighting(self, field):
        with pytest.raises(SingularAdjointError) as error:
            linearize(field(EULER_LIKE, "x,y", (1, 1), 4))
        assert error.value.degree == 1
        [kernel_field] = error.value.kernel
        assert [(term["axis"], term["exponents"]) for term in kernel_field["terms"]] == [(1, [2, 0])]

    def test_singular_certificate_carries_kernel(self, field):
        x0 = field("x*d/dx + 2*y*d/dy", "x,y", (1, 1), 4)
        certificate = certify_degree(x0, 1)
        assert not certificate.invertible
        assert certificate.determinant == 0
        [kernel_field] = certificate.kernel
        assert [(axis, alpha) for axis, alpha, _ in kernel_field.terms()] == [(1, (2, 0))]

    def test_not_admissible(self, field):
        with pytest.raises(NotAdmissibleError):
            linearize(field("x*d/dx + (2*y + x)*d/dy", "x,y", (1, 2), 4))

    def test_unknown_method(self, field):
        with pytest.raises(WeightlinError):
            linearize(field(EULER_LIKE, "x,y", (1, 2), 4), method="newton")

    def test_corrupted_diffeomorphism_fails_verification(self, field):
        x = field(EULER_LIKE, "x,y", (1, 2), 6)
        wrong = FormalDiffeo(x.context, parse_tuple("x + 1/2*y^2, y", x.context, ["x", "y"]))
        residual, ok = verify_linearization(x, wrong)
        assert not ok
        assert not residual.is_zero


class TestAdjoint:
    def test_jordan_linear_part_gives_triangular_matrices(self):
        ctx = SeriesContext.create((1, 2, 2, 3, 3), 4)
        x0 = parse_field(
            "x*d/dx + 2*y*d/dy + (y + 2*z)*d/dz + 3*u*d/du + (u + 3*v)*d/dv", ctx, ["x", "y", "z", "u", "v"]
        )
        for degree in (1, 2):
            matrix = adjoint_matrix(x0, degree)
            assert matrix.is_upper_triangular()
            assert certify_degree(x0, degree).invertible

    def test_euler_adjoint_is_scalar(self):
        ctx = SeriesContext.create((1, 2), 4)
        matrix = adjoint_matrix(euler_field(ctx), 2)
        assert matrix.diagonal() == [2] * matrix.dimension
        assert matrix.is_upper_triangular()
        certificate = is_adjoint_invertible(matrix)
        assert certificate.determinant == 2**matrix.dimension
        assert certificate.kernel == ()


def test_lie_series_matches_pullback(field):
    x = field(NON_EULER, "x,y", (1, 2), 6)
    padded = x.context.padded()
    generator = parse_field("-3/4*y^2*d/dx", padded, ["x", "y"])
    phi = FormalDiffeo(padded, parse_tuple("x - 3/4*y^2, y", padded, ["x", "y"]))
    lhs = lie_series(generator, x.recast(padded))
    assert lhs.recast(x.context) == pullback_vf(phi, x.recast(padded)).recast(x.context)


def test_oracle_method_on_euler_like_field(field):
    result = iterative_linearize_oracle(field(EULER_LIKE, "x,y", (1, 2), 8))
    assert result.method == "oracle"
    assert result.verified
    assert expressions(result.phi) == ["x + 1/3*y^2", "y"]


class TestResonanceDuality:
    @pytest.mark.parametrize("weights", [(1, 2), (1, 1, 2)])
    def test_resonances_are_singular_adjoint_degrees(self, rng, weights):
        ctx = SeriesContext.create(weights, 4)
        for _ in range(30):
            eigenvalues = [Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in weights]
            size = len(weights)
            x0 = VectorField.linear(ctx, [[eigenvalues[i] if i == j else 0 for j in range(size)] for i in range(size)])
            report = enumerate_resonances(eigenvalues, ctx.weighting, 3)
            for degree in range(1, 4):
                matrix = adjoint_matrix(x0, degree)
                det = bareiss_determinant(matrix.rows(), lambda a, b: a / b, lambda a: a == 0, Fraction(0), Fraction(1))
                assert (det == 0) == bool(report.at_degree(degree))

    def test_diagonal_adjoint_entries(self, rng):
        ctx = SeriesContext.create((1, 2, 3), 4)
        for _ in range(10):
            eigenvalues = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)]
            x0 = VectorField.linear(ctx, [[eigenvalues[i] if i == j else 0 for j in range(3)] for i in range(3)])
            for degree in (1, 2):
                matrix = adjoint_matrix(x0, degree)
                expected = [
                    sum((v * a for v, a in zip(eigenvalues, alpha, strict=True)), Fraction(0)) - eigenvalues[axis]
                    for axis, alpha in matrix.basis
                ]
                assert matrix.diagonal() == expected
                assert matrix.is_upper_triangular()
