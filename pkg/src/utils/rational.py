"""Text codec for exact rationals ("p/q" or "p")."""

import re
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema

from src.core.errors import MalformedRationalError

# Accepted forms: "3", "-3", "+3", "3/4", "-3/4"
RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse a rational from its string form.

    Args:
        text: String such as "3", "-2/5"

    Returns:
        Exact Fraction value

    Raises:
        MalformedRationalError: If the text is not an integer or a p/q ratio
    """
    match = RATIONAL_PATTERN.match(text)
    if match is None:
        raise MalformedRationalError(f"cannot read {text!r} as p/q")

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise MalformedRationalError(f"zero denominator in {text!r}")

    return Fraction(numerator, denominator)


def format_rational(value: Fraction | int) -> str:
    """Format a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _coerce_rational(value: Any) -> Any:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return value


# Pydantic field type: accepts "p/q" strings or ints, dumps back to "p/q"
Rational = Annotated[
    Fraction,
    BeforeValidator(_coerce_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^[+-]?\d+(/\d+)?$", "examples": ["1", "-2/3"]}),
]

# Arbitrary-precision integers travel as decimal strings in JSON
BigInt = Annotated[
    int,
    BeforeValidator(lambda value: int(value) if isinstance(value, str) else value),
    PlainSerializer(str, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^\d+$"}),
]
