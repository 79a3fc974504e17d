"""Parser and printer for the vector field grammar.

A field is a sum of terms ``coeff * monomial * d/dvar``; arbitrary parenthesised
sums, products, integer powers and division by rational constants are accepted,
e.g. ``(x + y^2)*d/dx + 2*y*d/dy``. Time-dependent fields may use the reserved
symbol ``t`` polynomially. The printer emits a canonical form that parses back
to the identical object.
"""

import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from .algebra.base import WeightlinError
from .algebra.flows import TimeVectorField
from .algebra.series import SeriesContext, TruncatedSeries, format_rational
from .algebra.vectorfields import VectorField
from .constants import TIME_SYMBOL

__all__ = [
    "ParseError",
    "DocumentError",
    "Token",
    "tokenize",
    "parse_series",
    "parse_field",
    "parse_time_field",
    "parse_tuple",
    "format_monomial",
    "format_series",
    "format_field",
    "series_from_json",
    "field_from_json",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r]+)
    |(?P<newline>\n)
    |(?P<derivative>d/d(?P<dvar>[A-Za-z_][A-Za-z_0-9]*))
    |(?P<number>\d+(?:\.\d+)?)
    |(?P<name>[A-Za-z_][A-Za-z_0-9]*)
    |(?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


class ParseError(WeightlinError):
    """Raised for malformed expressions; ``line`` and ``column`` are 1-based."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}", {"line": line, "column": column})
        self.line = line
        self.column = column


class DocumentError(WeightlinError):
    """Raised for JSON input documents of the wrong shape; ``path`` locates the entry."""

    code = "INVALID_DOCUMENT"

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}", {"path": path})
        self.path = path


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Split an expression into tokens, dropping whitespace.

    Raises:
        ParseError: On a character that starts no token.
    """
    tokens: list[Token] = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if match is None:
            raise ParseError(f"Unexpected character {text[position]!r}", line, column)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "derivative":
            tokens.append(Token(kind, match.group("dvar"), line, column))
        elif kind != "space":
            tokens.append(Token(kind, match.group(), line, column))
        position = match.end()
    tokens.append(Token("end", "", line, position - line_start + 1))
    return tokens


@dataclass
class _Value:
    """Polynomial in ``t`` whose coefficients are all series or all fields."""

    vector: bool
    parts: dict[int, Any] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return all(part.is_zero for part in self.parts.values())

    def constant(self) -> Fraction | None:
        """The rational value when this is a ``t``-free constant scalar."""
        if self.vector or any(k and not part.is_zero for k, part in self.parts.items()):
            return None
        series = self.parts.get(0)
        if series is None:
            return Fraction(0)
        if any(any(alpha) for alpha in series.terms):
            return None
        return series.constant_term


class _Parser:
    def __init__(self, text: str, context: SeriesContext, names: Sequence[str], time: bool):
        self.tokens = tokenize(text)
        self.index = 0
        self.context = context
        self.names = list(names)
        self.time = time and TIME_SYMBOL not in self.names

    # -- token helpers ----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.current
        return ParseError(message, token.line, token.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        token = self.current
        if token.kind != kind or (text is not None and token.text != text):
            wanted = text or kind
            found = token.text or "end of input"
            raise self.error(f"Expected {wanted!r}, found {found!r}")
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    # -- value helpers ----------------------------------------------------

    def scalar(self, series: TruncatedSeries, power: int = 0) -> _Value:
        return _Value(False, {power: series})

    def zero_like(self, vector: bool) -> Any:
        return VectorField.zero(self.context) if vector else TruncatedSeries.zero(self.context)

    def add(self, left: _Value, right: _Value, token: Token, sign: int = 1) -> _Value:
        if left.vector != right.vector:
            # A literal zero adapts to the other operand.
            if left.is_zero():
                left = _Value(right.vector)
            elif right.is_zero():
                right = _Value(left.vector)
            else:
                raise self.error("Cannot add a scalar and a vector field", token)
        parts = dict(left.parts)
        for k, part in right.parts.items():
            signed = part if sign > 0 else -part
            parts[k] = parts[k] + signed if k in parts else signed
        return _Value(left.vector, parts)

    def multiply(self, left: _Value, right: _Value, token: Token) -> _Value:
        if left.vector and right.vector:
            raise self.error("Cannot multiply two vector fields", token)
        vector = left.vector or right.vector
        parts: dict[int, Any] = {}
        for a, p in left.parts.items():
            for b, q in right.parts.items():
                if left.vector:
                    product = VectorField(self.context, [component * q for component in p.components])
                elif right.vector:
                    product = VectorField(self.context, [p * component for component in q.components])
                else:
                    product = p * q
                parts[a + b] = parts[a + b] + product if a + b in parts else product
        return _Value(vector, parts)

    # -- grammar ------------------------------------------------------------

    def parse(self) -> _Value:
        value = self.expression()
        if self.current.kind != "end":
            raise self.error(f"Unexpected {self.current.text!r}")
        return value

    def parse_tuple(self) -> list[_Value]:
        values = [self.expression()]
        while self.at_op(","):
            self.advance()
            values.append(self.expression())
        if self.current.kind != "end":
            raise self.error(f"Unexpected {self.current.text!r}")
        return values

    def expression(self) -> _Value:
        value = self.term()
        while self.at_op("+", "-"):
            token = self.advance()
            value = self.add(value, self.term(), token, 1 if token.text == "+" else -1)
        return value

    def term(self) -> _Value:
        value = self.unary()
        while self.at_op("*", "/"):
            token = self.advance()
            right = self.unary()
            if token.text == "*":
                value = self.multiply(value, right, token)
                continue
            divisor = right.constant()
            if divisor is None:
                raise self.error("Division is only supported by rational constants", token)
            if not divisor:
                raise self.error("Division by zero", token)
            value = self.multiply(value, self.scalar(TruncatedSeries.constant(self.context, 1 / divisor)), token)
        return value

    def unary(self) -> _Value:
        if self.at_op("-", "+"):
            token = self.advance()
            operand = self.unary()
            if token.text == "+":
                return operand
            return _Value(operand.vector, {k: -part for k, part in operand.parts.items()})
        return self.power()

    def power(self) -> _Value:
        base = self.atom()
        if self.at_op("^", "**"):
            token = self.advance()
            exponent_token = self.expect("number")
            if not exponent_token.text.isdigit():
                raise self.error("Exponents must be non-negative integers", exponent_token)
            if base.vector:
                raise self.error("Cannot raise a vector field to a power", token)
            result = self.scalar(TruncatedSeries.one(self.context))
            exponent = int(exponent_token.text)
            while exponent and not result.is_zero():
                if exponent & 1:
                    result = self.multiply(result, base, token)
                exponent >>= 1
                if exponent:
                    base = self.multiply(base, base, token)
            return result
        return base

    def atom(self) -> _Value:
        token = self.current
        if token.kind == "number":
            self.advance()
            return self.scalar(TruncatedSeries.constant(self.context, Fraction(token.text)))
        if token.kind == "name":
            self.advance()
            if token.text in self.names:
                return self.scalar(TruncatedSeries.variable(self.context, self.names.index(token.text)))
            if self.time and token.text == TIME_SYMBOL:
                return self.scalar(TruncatedSeries.one(self.context), power=1)
            raise self.error(f"Unknown identifier {token.text!r}", token)
        if token.kind == "derivative":
            self.advance()
            if token.text not in self.names:
                raise self.error(f"Unknown variable in d/d{token.text}", token)
            axis = self.names.index(token.text)
            return _Value(True, {0: VectorField.monomial(self.context, axis, [0] * self.context.dimension)})
        if self.at_op("("):
            self.advance()
            value = self.expression()
            self.expect("op", ")")
            return value
        found = token.text or "end of input"
        raise self.error(f"Unexpected {found!r}", token)


def _check_dimension(context: SeriesContext, names: Sequence[str]) -> None:
    if len(names) != context.dimension:
        raise WeightlinError(
            f"{len(names)} variable names for a context of dimension {context.dimension}",
            {"variables": list(names), "dimension": context.dimension},
        )


def _time_free(value: _Value, parser: _Parser) -> Any:
    if any(k and not part.is_zero for k, part in value.parts.items()):
        raise parser.error("The time symbol is not allowed here", parser.tokens[0])
    return value.parts.get(0, parser.zero_like(value.vector))


def parse_series(text: str, context: SeriesContext, names: Sequence[str]) -> TruncatedSeries:
    """Parse a scalar expression.

    Raises:
        ParseError: On malformed input or a vector-valued expression.
    """
    _check_dimension(context, names)
    parser = _Parser(text, context, names, time=False)
    value = parser.parse()
    if value.vector:
        raise ParseError("Expected a function, found a vector field", 1, 1)
    return _time_free(value, parser)


def parse_field(text: str, context: SeriesContext, names: Sequence[str]) -> VectorField:
    """Parse a vector field; a bare ``0`` is the zero field.

    Raises:
        ParseError: On malformed input, unknown identifiers or a nonzero scalar result.
    """
    _check_dimension(context, names)
    parser = _Parser(text, context, names, time=False)
    value = parser.parse()
    if not value.vector:
        if value.is_zero():
            return VectorField.zero(context)
        raise ParseError("Expected a vector field (terms need a d/dvar factor)", 1, 1)
    return _time_free(value, parser)


def parse_time_field(text: str, context: SeriesContext, names: Sequence[str]) -> TimeVectorField:
    """Parse a field that may depend polynomially on the reserved symbol ``t``."""
    _check_dimension(context, names)
    parser = _Parser(text, context, names, time=True)
    value = parser.parse()
    if not value.vector:
        if value.is_zero():
            return TimeVectorField.zero(context)
        raise ParseError("Expected a vector field (terms need a d/dvar factor)", 1, 1)
    top = max(value.parts, default=-1)
    return TimeVectorField(
        context, tuple(value.parts.get(k, VectorField.zero(context)) for k in range(top + 1))
    )


def parse_tuple(text: str, context: SeriesContext, names: Sequence[str]) -> list[TruncatedSeries]:
    """Parse a comma-separated tuple of functions such as ``"x, z, y - 2*z"``."""
    _check_dimension(context, names)
    parser = _Parser(text, context, names, time=False)
    values = parser.parse_tuple()
    result = []
    for value in values:
        if value.vector:
            raise ParseError("Tuple entries must be functions", 1, 1)
        result.append(_time_free(value, parser))
    return result


# -- printing -----------------------------------------------------------------


def format_monomial(alpha: Sequence[int], names: Sequence[str]) -> str:
    factors = [name if a == 1 else f"{name}^{a}" for name, a in zip(names, alpha, strict=True) if a]
    return "*".join(factors)


def _format_coefficient(magnitude: Fraction) -> str:
    return str(magnitude.numerator) if magnitude.denominator == 1 else format_rational(magnitude)


def _format_terms(items: Sequence[tuple[str, Fraction]]) -> str:
    """Join ``(body, coefficient)`` pairs; an empty body is a bare constant."""
    pieces: list[str] = []
    for body, coefficient in items:
        magnitude = abs(coefficient)
        if not body:
            text = _format_coefficient(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{_format_coefficient(magnitude)}*{body}"
        if not pieces:
            pieces.append(f"-{text}" if coefficient < 0 else text)
        else:
            pieces.append(f"{'-' if coefficient < 0 else '+'} {text}")
    return " ".join(pieces) if pieces else "0"


def format_series(series: TruncatedSeries, names: Sequence[str]) -> str:
    """Canonical text, terms in ascending weighted degree, e.g. ``"x - 1/3*y^2"``."""
    return _format_terms([(format_monomial(alpha, names), c) for alpha, c in series.items()])


def format_field(vector_field: VectorField, names: Sequence[str]) -> str:
    """Canonical text such as ``"(x + y^2)*d/dx + 2*y*d/dy"``."""
    items: list[tuple[str, Fraction]] = []
    for axis, component in enumerate(vector_field.components):
        marker = f"d/d{names[axis]}"
        terms = component.items()
        if not terms:
            continue
        if len(terms) == 1:
            alpha, coefficient = terms[0]
            monomial = format_monomial(alpha, names)
            items.append((f"{monomial}*{marker}" if monomial else marker, coefficient))
        else:
            items.append((f"({format_series(component, names)})*{marker}", Fraction(1)))
    return _format_terms(items)


# -- JSON documents -----------------------------------------------------------


def _is_exponent(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def _terms_from_json(data: Mapping[str, Any], context: SeriesContext, path: str) -> dict[tuple[int, ...], Fraction]:
    terms = data["terms"]
    if not isinstance(terms, list):
        raise DocumentError("expected a list of terms", f"{path}.terms")
    result: dict[tuple[int, ...], Fraction] = {}
    for index, term in enumerate(terms):
        where = f"{path}.terms[{index}]"
        if not isinstance(term, dict) or "exponents" not in term or "coefficient" not in term:
            raise DocumentError("expected an object with 'exponents' and 'coefficient'", where)
        exponents = term["exponents"]
        if not isinstance(exponents, list) or not all(_is_exponent(e) for e in exponents):
            raise DocumentError("exponents must be a list of non-negative integers", f"{where}.exponents")
        if len(exponents) != context.dimension:
            raise DocumentError(
                f"expected {context.dimension} exponents, got {len(exponents)}", f"{where}.exponents"
            )
        try:
            coefficient = Fraction(str(term["coefficient"]))
        except (ValueError, ZeroDivisionError) as e:
            raise DocumentError(f"invalid coefficient {term['coefficient']!r}", f"{where}.coefficient") from e
        alpha = tuple(exponents)
        result[alpha] = result.get(alpha, Fraction(0)) + coefficient
    return result


def series_from_json(
    data: Any, context: SeriesContext, names: Sequence[str], path: str = "series"
) -> TruncatedSeries:
    """Series from an expression string or a ``{"terms": [...]}`` object.

    Raises:
        DocumentError: If the object has the wrong shape.
    """
    if isinstance(data, str):
        return parse_series(data, context, names)
    if not isinstance(data, dict):
        raise DocumentError("expected an expression or an object", path)
    if "terms" in data:
        return TruncatedSeries(context, _terms_from_json(data, context, path))
    if isinstance(data.get("expression"), str):
        return parse_series(data["expression"], context, names)
    raise DocumentError("expected 'terms' or an 'expression' string", path)


def field_from_json(data: Any, context: SeriesContext, names: Sequence[str], path: str = "field") -> VectorField:
    """Field from an expression string or a ``{"components": [...]}`` object.

    Raises:
        DocumentError: If the object has the wrong shape or the component count
            differs from the dimension.
    """
    if isinstance(data, str):
        return parse_field(data, context, names)
    if not isinstance(data, dict):
        raise DocumentError("expected an expression or an object", path)
    if "components" in data:
        entries = data["components"]
        if not isinstance(entries, list):
            raise DocumentError("expected a list of components", f"{path}.components")
        if len(entries) != context.dimension:
            raise DocumentError(
                f"field has {len(entries)} components for dimension {context.dimension}", f"{path}.components"
            )
        components = [
            series_from_json(entry, context, names, f"{path}.components[{index}]")
            for index, entry in enumerate(entries)
        ]
        return VectorField(context, components)
    if isinstance(data.get("expression"), str):
        return parse_field(data["expression"], context, names)
    raise DocumentError("expected 'components' or an 'expression' string", path)
