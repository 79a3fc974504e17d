import math

import pytest

from conftest import random_admissible_field
from weightlin.algebra.base import NonzeroConstantTermError, SpectralError
from weightlin.algebra.polynomial import Polynomial
from weightlin.algebra.series import SeriesContext, Weighting
from weightlin.algebra.spectral import (
    Resonance,
    Unsupported,
    char_poly,
    compatible_ordering,
    enumerate_resonances,
    enumerate_resonances_heuristic,
    imaginary_axis_parts,
    is_hyperbolic,
    is_hyperbolic_polynomial,
    linear_part,
    nonresonance_implies_hyperbolic_check,
    spectrum_is_invariant,
    weighted_linear_part,
)

FIVE_VARIABLES = "x*d/dx + (4*y + z)*d/dy - 4*y*d/dz + (4*u - v)*d/du + (u + 2*v)*d/dv"


@pytest.fixture
def five_variable_field(field):
    return field(FIVE_VARIABLES, "x,y,z,u,v", (1, 2, 2, 3, 3), 4)


class TestLinearPart:
    def test_matrix_is_transposed_jacobian(self, field):
        linear = linear_part(field("(x + 3*y)*d/dx + 2*y*d/dy", "x,y", (1, 1), 3))
        assert linear.rows() == [[1, 0], [3, 2]]

    def test_weighted_linear_part_drops_positive_slices(self, field):
        x = field("(x + y)*d/dx + 2*y*d/dy", "x,y", (1, 2), 4)
        assert weighted_linear_part(x).rows() == [[1, 0], [0, 2]]
        assert not linear_part(x).is_block_diagonal()
        with pytest.raises(SpectralError):
            compatible_ordering(linear_part(x))

    def test_field_must_vanish_at_origin(self, field):
        with pytest.raises(NonzeroConstantTermError):
            linear_part(field("(x + 1)*d/dx", "x", (1,), 3))

    def test_char_poly(self):
        assert char_poly([[0, 1], [2, 0]]) == Polynomial([-2, 0, 1])
        assert char_poly([[1, 0], [0, 2]]) == Polynomial.from_roots([1, 2])

    @pytest.mark.parametrize("weights", [(1, 2, 2, 3), (1, 1, 2)])
    def test_random_fields_commute_and_share_spectrum(self, rng, weights):
        ctx = SeriesContext.create(weights, 5)
        for _ in range(50):
            x = random_admissible_field(rng, ctx)
            weighted = weighted_linear_part(x)
            assert char_poly(weighted) == char_poly(linear_part(x))
            assert spectrum_is_invariant(x)


class TestOrdering:
    def test_five_variable_example(self, five_variable_field):
        linear = weighted_linear_part(five_variable_field)
        assert char_poly(linear.block(1)) == Polynomial.from_roots([2, 2])
        assert char_poly(linear.block(2)) == Polynomial.from_roots([3, 3])
        assert compatible_ordering(linear) == (1, 2, 2, 3, 3)
        assert spectrum_is_invariant(five_variable_field)

    def test_irrational_spectrum_is_unsupported(self, field):
        linear = weighted_linear_part(field("y*d/dx + 2*x*d/dy", "x,y", (1, 1), 3))
        ordering = compatible_ordering(linear)
        assert isinstance(ordering, Unsupported)
        assert ordering.factors == {0: Polynomial([-2, 0, 1])}
        assert "t^2 - 2" in ordering.reason

    def test_heuristic_scan_on_irrational_spectrum(self, field):
        x = field("y*d/dx + 2*x*d/dy", "x,y", (1, 1), 3)
        report = enumerate_resonances_heuristic(weighted_linear_part(x), x.context.weighting, 2)
        assert report.exactness == "heuristic"
        assert [value.real for value in report.eigenvalues] == pytest.approx([-math.sqrt(2), math.sqrt(2)])
        assert set(report.resonances) == {Resonance(1, (1, 2), 2), Resonance(0, (2, 1), 2)}


class TestResonances:
    def test_trivial_weighting(self):
        report = enumerate_resonances((1, 2), Weighting.trivial(2), 2)
        assert report.resonances == (Resonance(1, (2, 0), 1),)
        assert report.at_degree(2) == []
        assert not report.is_nonresonant

    def test_weights_as_eigenvalues_are_nonresonant(self):
        weighting = Weighting((1, 2, 2, 3, 3))
        assert enumerate_resonances(weighting.weights, weighting, 5).is_nonresonant

    def test_resonance_needs_positive_degree(self):
        weighting = Weighting((1, 2))
        report = enumerate_resonances((1, 2), weighting, 3)
        assert all(resonance.degree >= 1 for resonance in report.resonances)
        assert report.is_nonresonant


class TestHyperbolicity:
    @pytest.mark.parametrize(
        ("coefficients", "expected"),
        [
            ([1, 0, 1], False),
            ([-1, 0, 1], True),
            ([0, 1], False),
            ([2, 1], True),
            ([5, -2, 1], True),
            ([4, 0, 5, 0, 1], False),
        ],
    )
    def test_polynomials(self, coefficients, expected):
        assert is_hyperbolic_polynomial(Polynomial(coefficients)) is expected

    def test_imaginary_axis_parts(self):
        real, imaginary = imaginary_axis_parts(Polynomial([1, 2, 3]))
        assert real == Polynomial([1, 0, -3])
        assert imaginary == Polynomial([0, 2])

    def test_five_variable_example(self, five_variable_field):
        assert is_hyperbolic(weighted_linear_part(five_variable_field))
        diagnostic = nonresonance_implies_hyperbolic_check(five_variable_field, 3)
        assert diagnostic.consistent
        assert diagnostic.nonresonant
        assert not diagnostic.zero_eigenvalue

    def test_zero_eigenvalue_forces_a_resonance(self, field):
        diagnostic = nonresonance_implies_hyperbolic_check(field("x*d/dx", "x,y", (1, 1), 3), 1)
        assert diagnostic.zero_eigenvalue
        assert not diagnostic.nonresonant
        assert diagnostic.consistent

    def test_irrational_spectrum_is_rejected(self, field):
        with pytest.raises(SpectralError):
            nonresonance_implies_hyperbolic_check(field("y*d/dx + 2*x*d/dy", "x,y", (1, 1), 3), 2)
