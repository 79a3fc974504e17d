"""Univariate polynomials with rational coefficients.

A thin wrapper around :class:`sympy.Poly` over ``QQ`` that speaks
:class:`~fractions.Fraction` to the rest of the algebra. It provides what the
spectral analysis needs: Euclidean division, gcd, rational root extraction and
Sturm sequences for counting real roots.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction

from sympy import QQ, Poly, Rational, Symbol

from .series import Scalar, format_rational

__all__ = ["Polynomial", "sign_changes", "to_fraction"]

_T = Symbol("t")


def to_fraction(value: object) -> Fraction:
    """Convert a sympy rational (or ``QQ`` element) to a :class:`Fraction`."""
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _rational(value: Scalar) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


class Polynomial:
    """Polynomial ``c0 + c1 t + ... + cd t^d`` over the rationals (immutable).

    ``coefficients`` lists ascending powers without trailing zeros.
    """

    __slots__ = ("poly", "coefficients")

    def __init__(self, coefficients: Iterable[Scalar] = ()):
        values = [Fraction(c) for c in coefficients]
        descending = [QQ(c.numerator, c.denominator) for c in reversed(values)]
        self._set(Poly.from_list(descending or [QQ(0)], _T, domain=QQ))

    def _set(self, poly: Poly) -> None:
        self.poly = poly
        self.coefficients: tuple[Fraction, ...] = (
            () if poly.is_zero else tuple(to_fraction(c) for c in reversed(poly.all_coeffs()))
        )

    @classmethod
    def _wrap(cls, poly: Poly) -> Polynomial:
        result = cls.__new__(cls)
        result._set(poly)
        return result

    @classmethod
    def constant(cls, value: Scalar) -> Polynomial:
        return cls([value])

    @classmethod
    def variable(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> Polynomial:
        result = Poly(1, _T, domain=QQ)
        for root in roots:
            result = result * Poly(_T - _rational(root), _T, domain=QQ)
        return cls._wrap(result)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, value: Scalar) -> Fraction:
        return to_fraction(self.poly.eval(_rational(value)))

    def _coerce(self, other: object) -> Polynomial | None:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other)
        return None

    def __add__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial._wrap(self.poly + rhs.poly)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._wrap(-self.poly)

    def __sub__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial._wrap(self.poly - rhs.poly)

    def __rsub__(self, other: object) -> Polynomial:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> Polynomial:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return Polynomial._wrap(self.poly * rhs.poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        return Polynomial._wrap(self.poly**exponent)

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero:
            raise ZeroDivisionError("Polynomial division by zero")
        quotient, remainder = self.poly.div(other.poly)
        return Polynomial._wrap(quotient), Polynomial._wrap(remainder)

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def exact_divide(self, other: Polynomial) -> Polynomial:
        quotient, remainder = divmod(self, other)
        if not remainder.is_zero:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quotient

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self.coefficients == rhs.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def derivative(self) -> Polynomial:
        return Polynomial._wrap(self.poly.diff(_T))

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return Polynomial._wrap(self.poly.monic())

    def gcd(self, other: Polynomial) -> Polynomial:
        """Monic greatest common divisor (zero only when both inputs are zero)."""
        return Polynomial._wrap(self.poly.gcd(other.poly)).monic()

    def squarefree_part(self) -> Polynomial:
        if self.degree < 1:
            return self.monic()
        return Polynomial._wrap(self.poly.sqf_part()).monic()

    # -- real roots -------------------------------------------------------

    def sign_at(self, value: Scalar | None, *, infinity: int = 0) -> int:
        """Sign at a rational point, or at +inf (``infinity=1``) / -inf (``infinity=-1``)."""
        if self.is_zero:
            return 0
        if infinity:
            lead_sign = 1 if self.leading > 0 else -1
            return lead_sign if infinity > 0 or self.degree % 2 == 0 else -lead_sign
        result = self(value)
        return (result > 0) - (result < 0)

    def sturm_sequence(self) -> list[Polynomial]:
        """Sturm chain p, p', -rem(p, p'), ... built on the squarefree part."""
        base = self.squarefree_part()
        if base.degree < 1:
            return [base]
        return [Polynomial._wrap(p) for p in base.poly.sturm() if not p.is_zero]

    def count_real_roots(self, lower: Scalar | None = None, upper: Scalar | None = None) -> int:
        """Number of distinct real roots in ``(lower, upper]``; ``None`` bounds mean infinity.

        Raises:
            ValueError: For the zero polynomial.
        """
        if self.is_zero:
            raise ValueError("The zero polynomial has infinitely many roots")
        if self.degree < 1:
            return 0
        chain = self.sturm_sequence()
        low = [p.sign_at(lower, infinity=-1 if lower is None else 0) for p in chain]
        high = [p.sign_at(upper, infinity=1 if upper is None else 0) for p in chain]
        return sign_changes(low) - sign_changes(high)

    def has_real_root(self) -> bool:
        return self.count_real_roots() > 0

    def rational_roots(self) -> dict[Fraction, int]:
        """Rational roots with their multiplicities, read off the linear factors over ``QQ``."""
        if self.degree < 1:
            return {}
        roots: dict[Fraction, int] = {}
        for factor, multiplicity in self.poly.factor_list()[1]:
            if factor.degree() == 1:
                slope, offset = (to_fraction(c) for c in factor.all_coeffs())
                roots[-offset / slope] = multiplicity
        return roots

    def split_rational(self) -> tuple[list[Fraction], Polynomial]:
        """Rational roots (with repetition, ascending) and the monic cofactor without rational roots."""
        roots = self.rational_roots()
        cofactor = self.monic()
        listed: list[Fraction] = []
        for root in sorted(roots):
            for _ in range(roots[root]):
                listed.append(root)
                cofactor = cofactor.exact_divide(Polynomial([-root, 1]))
        return listed, cofactor

    def to_text(self, variable: str = "t") -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            magnitude = abs(c)
            power = "" if k == 0 else (variable if k == 1 else f"{variable}^{k}")
            if not power:
                body = _short(magnitude)
            elif magnitude == 1:
                body = power
            else:
                body = f"{_short(magnitude)}*{power}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()})"

    __str__ = to_text


def _short(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else format_rational(value)


def sign_changes(signs: Sequence[int]) -> int:
    """Number of sign changes in a sequence, ignoring zeros."""
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:], strict=False) if a != b)
