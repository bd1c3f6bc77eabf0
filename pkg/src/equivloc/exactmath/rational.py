"""Rational numbers.

``fractions.Fraction`` already keeps values in lowest terms with a positive
denominator, so it is used directly; this module only adds strict parsing
and the ``"p/q"`` string form used in documents.
"""

from fractions import Fraction
from math import gcd

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: every quantity in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def clear_denominators(values):
    """Scale a rational vector to coprime integers.

    The sign is left alone; callers choose their own sign convention.
    Returns the zero vector unchanged (as ints).
    """
    values = [as_rational(v) for v in values]
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g > 1:
        ints = [i // g for i in ints]
    return ints


def primitive_integer_vector(values):
    """Primitive integral vector in the direction of a nonzero rational vector."""
    ints = clear_denominators(values)
    if not any(ints):
        raise ValueError("zero vector has no primitive direction")
    return tuple(ints)
