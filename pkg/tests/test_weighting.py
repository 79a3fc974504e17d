import pytest

from conftest import random_admissible_field
from weightlin.algebra.base import NotAdmissibleError, SliceLeakageError
from weightlin.algebra.series import INFINITY, SeriesContext, Weighting
from weightlin.algebra.vectorfields import VectorField
from weightlin.algebra.weighting import (
    block_structure,
    euler_field,
    graded_component_vf,
    graded_decomposition,
    is_admissible,
    is_quasi_homogeneous,
    is_weighted_euler_like,
    kappa_family,
    require_admissible,
    slice_basis,
    slice_dimension,
    slice_order_key,
    vf_order,
    weighted_compositions,
    weighted_linear_approximation,
)


def test_block_structure():
    blocks = block_structure(Weighting((1, 2, 2, 3, 3)))
    assert blocks.block_weights == (1, 2, 3)
    assert blocks.multiplicities == (1, 2, 2)
    assert blocks.axis_blocks == (0, 1, 1, 2, 2)
    assert blocks.axes(1) == [1, 2]


def test_weighted_compositions():
    assert set(weighted_compositions(Weighting((1, 2)), 4)) == {(4, 0), (2, 1), (0, 2)}
    assert weighted_compositions(Weighting((2, 3)), 1) == ()
    assert weighted_compositions(Weighting((1, 2)), -1) == ()


class TestSlices:
    def test_slice_basis_order(self):
        basis = slice_basis(Weighting((1, 2)), 1)
        assert basis.elements == ((1, (3, 0)), (1, (1, 1)), (0, (2, 0)), (0, (0, 1)))

    @pytest.mark.parametrize("weights", [(1, 1), (1, 2), (1, 2, 2, 3, 3), (2, 3)])
    def test_slice_basis_is_strictly_ordered(self, weights):
        weighting = Weighting(weights)
        for degree in range(-weighting.max_weight, 4):
            basis = slice_basis(weighting, degree)
            keys = [slice_order_key(element) for element in basis]
            assert keys == sorted(keys)
            assert len(set(keys)) == len(keys)
            assert slice_dimension(weighting, degree) == len(basis)

    def test_lowest_slice(self):
        basis = slice_basis(Weighting((1, 2)), -2)
        assert basis.elements == ((1, (0, 0)),)

    def test_coordinates_round_trip(self):
        ctx = SeriesContext.create((1, 2), 4)
        basis = slice_basis(ctx.weighting, 1)
        coordinates = [1, 0, -2, 5]
        assert basis.coordinates(basis.field(ctx, coordinates)) == coordinates
        assert basis.element_field(ctx, 0) == VectorField.monomial(ctx, 1, (3, 0))

    def test_coordinates_reject_other_slices(self, field):
        basis = slice_basis(Weighting((1, 2)), 1)
        with pytest.raises(SliceLeakageError):
            basis.coordinates(field("x*d/dx", "x,y", (1, 2), 4))

    def test_graded_decomposition(self, field):
        x = field("(x + y + x^2)*d/dx + (2*y + x^3)*d/dy", "x,y", (1, 2), 6)
        slices = graded_decomposition(x)
        assert list(slices) == [0, 1]
        assert slices[0] == field("x*d/dx + 2*y*d/dy", "x,y", (1, 2), 6)
        assert slices[1] == field("(y + x^2)*d/dx + x^3*d/dy", "x,y", (1, 2), 6)
        assert sum(slices.values(), VectorField.zero(x.context)) == x
        assert vf_order(x) == 0
        assert vf_order(VectorField.zero(x.context)) == INFINITY


class TestAdmissibility:
    def test_witness(self, field):
        check = is_admissible(field("x*d/dy", "x,y", (1, 2), 4))
        assert not check
        assert (check.axis, check.exponents, check.degree) == (1, (1, 0), -1)

    def test_require_admissible_raises(self, field):
        with pytest.raises(NotAdmissibleError) as error:
            require_admissible(field("y*d/dx + x*d/dy", "x,y", (1, 2), 4))
        assert error.value.details == {"axis": 1, "exponents": [1, 0], "degree": -1}

    def test_linear_fields_are_admissible_for_trivial_weights(self, field):
        assert is_admissible(field("y*d/dx + x*d/dy", "x,y", (1, 1), 4))


class TestEulerLike:
    def test_euler_field(self, field):
        ctx = SeriesContext.create((1, 2), 6)
        assert euler_field(ctx) == field("x*d/dx + 2*y*d/dy", "x,y", (1, 2), 6)

    def test_euler_like_detection(self, field):
        assert is_weighted_euler_like(field("(x + y^2)*d/dx + 2*y*d/dy", "x,y", (1, 2), 6))
        assert not is_weighted_euler_like(field("x*d/dx + 7/3*y*d/dy", "x,y", (1, 2), 6))
        assert not is_weighted_euler_like(field("(x + 1)*d/dx + 2*y*d/dy", "x,y", (1, 2), 6))

    def test_euler_bracket_characterizes_slices(self, rng):
        ctx = SeriesContext.create((1, 2, 3), 7)
        euler = euler_field(ctx)
        for _ in range(10):
            x = random_admissible_field(rng, ctx)
            for degree, component in graded_decomposition(x).items():
                assert euler.bracket(component) == component.scale(degree)
                assert is_quasi_homogeneous(component, degree)

    def test_weighted_linear_approximation(self, field):
        x = field("(x + y^2)*d/dx + (2*y + x^2 + x*y)*d/dy", "x,y", (1, 2), 6)
        assert weighted_linear_approximation(x) == field("x*d/dx + (2*y + x^2)*d/dy", "x,y", (1, 2), 6)


class TestKappaFamily:
    def test_endpoints(self, field):
        x = field("(x + y^2)*d/dx + (7/3*y + x*y)*d/dy", "x,y", (1, 2), 6)
        family = kappa_family(x)
        assert family.evaluate(0) == graded_component_vf(x, 0)
        assert family.evaluate(1) == x

    def test_rejects_inadmissible_field(self, field):
        with pytest.raises(NotAdmissibleError):
            kappa_family(field("x*d/dy", "x,y", (1, 2), 4))
