"""
Number helpers. Values read from files become Fractions so the fixture arithmetic is exact;
generated benchmark data stays float. Every formula in the engine works on either.
"""

from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Real
import math
from typing import Union

Number = Union[Fraction, float, int]


def to_number(value) -> Fraction:
    """Converts a YAML scalar or text token to an exact Fraction ('1.6' -> 8/5, 0.001 -> 1/1000)."""
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a number: {value!r}")


def is_finite(value: Real) -> bool:
    return isinstance(value, Fraction) or math.isfinite(value)


def _has_finite_decimal(f: Fraction) -> bool:
    d = f.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_number(value: Number) -> str:
    """Renders 24/5 as '4.8', 1000 as '1000' and 1/3 as '1/3'."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        if _has_finite_decimal(value):
            with localcontext() as ctx:
                ctx.prec = 50
                d = Decimal(value.numerator) / Decimal(value.denominator)
            return format(d.normalize(), "f")
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def format_quantity(value: Number, unit: str) -> str:
    text = format_number(value)
    return f"{text}{unit}" if unit else text


def fixed6(value: Number) -> str:
    return format(float(value), ".6f")
