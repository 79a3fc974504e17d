from fractions import Fraction

import numpy as np
import pytest

from weightlin.algebra.base import NotInvertibleError
from weightlin.algebra.linalg import (
    bareiss_determinant,
    characteristic_coefficients,
    determinant,
    identity,
    inverse,
    is_upper_triangular,
    kernel,
    mat_mul,
    mat_vec,
    rank,
    reduced_row_echelon,
    solve,
    to_matrix,
)


def test_determinant_of_rational_matrix():
    matrix = [[Fraction(1, 2), 3], [Fraction(2, 3), 4]]
    assert determinant(matrix) == Fraction(1, 2) * 4 - 3 * Fraction(2, 3)


def test_determinant_needs_row_swap():
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[0, 0], [1, 2]]) == 0


def test_bareiss_on_integers_matches_numpy(rng):
    for size in range(1, 6):
        matrix = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
        exact = bareiss_determinant(matrix, lambda a, b: a // b, lambda a: a == 0, 0, 1)
        assert exact == round(np.linalg.det(np.array(matrix, dtype=float)))


def test_solve_and_inverse():
    matrix = to_matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    rhs = [Fraction(1), Fraction(2), Fraction(3)]
    solution = solve(matrix, rhs)
    assert mat_vec(matrix, solution) == rhs
    assert mat_mul(matrix, inverse(matrix)) == identity(3)


def test_singular_system_raises():
    with pytest.raises(NotInvertibleError):
        solve([[1, 2], [2, 4]], [1, 2])
    with pytest.raises(NotInvertibleError):
        inverse([[1, 2], [2, 4]])


def test_kernel_basis():
    matrix = [[1, 2, 3], [2, 4, 6]]
    basis = kernel(matrix)
    assert rank(matrix) == 1
    assert len(basis) == 2
    for vector in basis:
        assert mat_vec(to_matrix(matrix), vector) == [0, 0]


def test_kernel_of_empty_matrix():
    assert kernel([], columns=2) == [[1, 0], [0, 1]]


def test_upper_triangular():
    assert is_upper_triangular(to_matrix([[1, 2], [0, 3]]))
    assert not is_upper_triangular(to_matrix([[1, 0], [1, 3]]))


def test_rational_systems(rng):
    for size in range(1, 7):
        matrix = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(size)] for _ in range(size)]
        if determinant(matrix) == 0:
            continue
        rhs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(size)]
        solution = solve(matrix, rhs)
        assert mat_vec(matrix, solution) == rhs
        assert mat_vec(inverse(matrix), rhs) == solution


def test_reduced_row_echelon_of_rational_rows():
    echelon, pivots = reduced_row_echelon([[Fraction(1, 2), 1, 0], [1, 2, Fraction(1, 3)]])
    assert pivots == [0, 2]
    assert echelon == [[1, 2, 0], [0, 0, 1]]


def test_characteristic_coefficients():
    assert characteristic_coefficients([[0, 1], [2, 0]]) == [1, 0, -2]
    assert characteristic_coefficients([[Fraction(1, 2), 0], [0, 3]]) == [1, Fraction(-7, 2), Fraction(3, 2)]
    assert characteristic_coefficients([]) == [1]


def test_triangular_system_is_back_substituted():
    matrix = [[2, Fraction(1, 3), 0], [0, -1, 5], [0, 0, Fraction(1, 2)]]
    rhs = [Fraction(1), Fraction(2), Fraction(3)]
    solution = solve(matrix, rhs)
    assert solution == [Fraction(-25, 6), 28, 6]
    assert determinant(matrix) == -1
