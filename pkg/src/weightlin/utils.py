"""Shared utility functions for parsing CLI option values."""

from fractions import Fraction

__all__ = ["parse_fraction", "parse_int_list", "parse_names"]


def parse_fraction(value: str) -> Fraction:
    """Parse ``"3"``, ``"-1/2"`` or ``"0.25"`` into an exact fraction.

    Raises:
        ValueError: If the text is not a rational number.
    """
    return Fraction(value.strip())


def parse_int_list(value: str) -> tuple[int, ...]:
    """Parse a comma-separated list of integers such as ``"1,2,2"``.

    Raises:
        ValueError: If an entry is not an integer.
    """
    parts = [part.strip() for part in value.split(",")]
    if not parts or any(not part for part in parts):
        raise ValueError(f"Expected a comma-separated list of integers, got {value!r}")
    return tuple(int(part) for part in parts)


def parse_names(value: str) -> tuple[str, ...]:
    """Parse a comma-separated list of identifiers such as ``"x,y,z"``.

    Raises:
        ValueError: If an entry is not a valid identifier.
    """
    names = tuple(part.strip() for part in value.split(","))
    for name in names:
        if not name.isidentifier():
            raise ValueError(f"Invalid variable name {name!r}")
    return names
