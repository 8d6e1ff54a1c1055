"""Helpers for exact rational values and their serialized form.

Rationals travel through JSON as integers or "p/q" strings; floats are
rejected everywhere so no inexact value can sneak into a computation.
"""

from fractions import Fraction


def as_fraction(value):
    """Coerce an int, Fraction, or "p/q" string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_to_json(value):
    """Render a Fraction as an int (when integral) or a "p/q" string."""
    f = Fraction(value)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def format_rational(value):
    """Human-facing "p/q" plus a short decimal approximation."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator} (~{float(f):.6g})"


def floor_log2(value):
    """Largest integer p with 2**p <= value, computed exactly.

    value must be a positive rational.
    """
    f = Fraction(value)
    if f <= 0:
        raise ValueError("floor_log2 requires a positive value")
    p = f.numerator.bit_length() - f.denominator.bit_length()
    # bit-length estimate can be off by one in either direction
    while Fraction(2) ** p > f:
        p -= 1
    while Fraction(2) ** (p + 1) <= f:
        p += 1
    return p


def ceil_log2_int(n):
    """Smallest integer p with 2**p >= n, for integer n >= 1."""
    if n < 1:
        raise ValueError("ceil_log2_int requires n >= 1")
    return (n - 1).bit_length()
