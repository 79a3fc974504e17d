"""Exact dense linear algebra over the rationals.

Determinants use Bareiss' fraction-free elimination. Rank, kernels and solves
go through sympy's fraction-free :class:`DomainMatrix` reduction over ``ZZ``.
Matrices are plain lists of :class:`~fractions.Fraction` rows.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from fractions import Fraction
from math import lcm, prod
from typing import TypeVar

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .base import NotInvertibleError

__all__ = [
    "Matrix",
    "to_matrix",
    "identity",
    "transpose",
    "mat_mul",
    "mat_vec",
    "bareiss_determinant",
    "determinant",
    "reduced_row_echelon",
    "rank",
    "kernel",
    "solve",
    "inverse",
    "characteristic_coefficients",
    "is_upper_triangular",
]

Matrix = list[list[Fraction]]
T = TypeVar("T")


def to_matrix(rows: Sequence[Sequence[int | Fraction]]) -> Matrix:
    return [[Fraction(entry) for entry in row] for row in rows]


def identity(size: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def transpose(matrix: Sequence[Sequence[T]]) -> list[list[T]]:
    return [list(column) for column in zip(*matrix, strict=True)]


def mat_mul(left: Sequence[Sequence[Fraction]], right: Sequence[Sequence[Fraction]]) -> Matrix:
    columns = transpose(right)
    return [[sum((a * b for a, b in zip(row, col, strict=True)), Fraction(0)) for col in columns] for row in left]


def mat_vec(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, vector, strict=True)), Fraction(0)) for row in matrix]


def bareiss_determinant(
    matrix: Sequence[Sequence[T]],
    exact_divide: Callable[[T, T], T],
    is_zero: Callable[[T], bool],
    zero: T,
    one: T,
) -> T:
    """Determinant over an integral domain by Bareiss' fraction-free elimination.

    Args:
        matrix: Square matrix with entries in the domain.
        exact_divide: Division that is known to be exact in the domain.
        is_zero: Zero test for domain elements.
        zero: The domain's zero.
        one: The domain's one.

    Returns:
        The determinant as a domain element.
    """
    size = len(matrix)
    if size == 0:
        return one
    work = [list(row) for row in matrix]
    sign = 1
    previous = one
    for k in range(size - 1):
        if is_zero(work[k][k]):
            for i in range(k + 1, size):
                if not is_zero(work[i][k]):
                    work[k], work[i] = work[i], work[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = work[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = exact_divide(pivot * work[i][j] - work[i][k] * work[k][j], previous)
            work[i][k] = zero
        previous = pivot
    det = work[size - 1][size - 1]
    return det if sign > 0 else -det


def determinant(matrix: Sequence[Sequence[int | Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix.

    Rows are scaled to integers first so that the elimination stays fraction-free.
    """
    rows = to_matrix(matrix)
    if is_upper_triangular(rows):
        return prod((rows[i][i] for i in range(len(rows))), start=Fraction(1))
    integer_rows, factors = _integer_rows(matrix)
    det = bareiss_determinant(integer_rows, lambda a, b: a // b, lambda a: a == 0, 0, 1)
    return Fraction(det, prod(factors))


def _integer_rows(matrix: Sequence[Sequence[int | Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators; returns the rows and the factors."""
    integer_rows = []
    factors = []
    for row in to_matrix(matrix):
        factor = lcm(*(entry.denominator for entry in row)) if row else 1
        factors.append(factor)
        integer_rows.append([int(entry * factor) for entry in row])
    return integer_rows, factors


def reduced_row_echelon(matrix: Sequence[Sequence[int | Fraction]]) -> tuple[Matrix, list[int]]:
    """Return the reduced row echelon form and the pivot columns.

    Rows are scaled to integers and reduced fraction-free over ``ZZ`` with the
    sparse :meth:`DomainMatrix.rref_den`; only the final division is rational.
    """
    integer_rows, _ = _integer_rows(matrix)
    if not integer_rows or not integer_rows[0]:
        return to_matrix(matrix), []
    shape = (len(integer_rows), len(integer_rows[0]))
    entries = {i: {j: ZZ(entry) for j, entry in enumerate(row) if entry} for i, row in enumerate(integer_rows)}
    system = DomainMatrix({i: row for i, row in entries.items() if row}, shape, ZZ)
    echelon, denominator, pivots = system.rref_den()
    scale = int(denominator)
    return [[Fraction(int(entry), scale) for entry in row] for row in echelon.to_list()], list(pivots)


def rank(matrix: Sequence[Sequence[int | Fraction]]) -> int:
    return len(reduced_row_echelon(matrix)[1])


def kernel(matrix: Sequence[Sequence[int | Fraction]], columns: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column.

    Args:
        matrix: The matrix (may have zero rows when ``columns`` is given).
        columns: Number of columns, required only for an empty matrix.
    """
    echelon, pivots = reduced_row_echelon(matrix)
    width = len(echelon[0]) if echelon else (columns or 0)
    free = [j for j in range(width) if j not in pivots]
    basis: list[list[Fraction]] = []
    for free_column in free:
        vector = [Fraction(0)] * width
        vector[free_column] = Fraction(1)
        for row, pivot_column in enumerate(pivots):
            vector[pivot_column] = -echelon[row][free_column]
        basis.append(vector)
    return basis


def _back_substitute(matrix: Matrix, rhs: Sequence[int | Fraction]) -> list[Fraction] | None:
    """Solution of an upper triangular system with a nonzero diagonal, else ``None``."""
    size = len(matrix)
    if not is_upper_triangular(matrix) or not all(matrix[i][i] for i in range(size)):
        return None
    values = [Fraction(0)] * size
    for i in reversed(range(size)):
        row = matrix[i]
        total = Fraction(rhs[i]) - sum((row[j] * values[j] for j in range(i + 1, size) if row[j]), Fraction(0))
        values[i] = total / row[i]
    return values


def solve(matrix: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly.

    Raises:
        NotInvertibleError: If the matrix is singular.
    """
    size = len(matrix)
    triangular = _back_substitute(to_matrix(matrix), rhs)
    if triangular is not None:
        return triangular
    augmented = [list(row) + [value] for row, value in zip(matrix, rhs, strict=True)]
    echelon, pivots = reduced_row_echelon(augmented)
    if pivots != list(range(size)):
        raise NotInvertibleError("Linear system is singular", {"rank": len([p for p in pivots if p < size])})
    return [echelon[i][size] for i in range(size)]


def inverse(matrix: Sequence[Sequence[int | Fraction]]) -> Matrix:
    """Exact inverse of a square matrix.

    Raises:
        NotInvertibleError: If the matrix is singular.
    """
    size = len(matrix)
    augmented = [list(row) + unit for row, unit in zip(matrix, identity(size), strict=True)]
    echelon, pivots = reduced_row_echelon(augmented)
    if pivots[:size] != list(range(size)):
        raise NotInvertibleError("Matrix is singular")
    return [row[size:] for row in echelon]


def characteristic_coefficients(matrix: Sequence[Sequence[int | Fraction]]) -> list[Fraction]:
    """Coefficients of ``det(t I - M)``, highest power first."""
    size = len(matrix)
    if not size:
        return [Fraction(1)]
    rows = [[QQ(entry.numerator, entry.denominator) for entry in row] for row in to_matrix(matrix)]
    return [Fraction(int(QQ.numer(c)), int(QQ.denom(c))) for c in DomainMatrix(rows, (size, size), QQ).charpoly()]


def is_upper_triangular(matrix: Sequence[Sequence[Fraction]]) -> bool:
    return all(not matrix[i][j] for i in range(len(matrix)) for j in range(min(i, len(matrix[i]))))
