"""Small helpers for exact rational input and output."""

from fractions import Fraction
from math import lcm
import numbers

from .errors import ValidationError


def as_rational(x):
    """Coerce ``x`` to an ``int`` or ``Fraction``.

    Accepts ints, Fractions, decimal strings and ``"p/q"`` strings. Floats are
    read through their shortest decimal representation. Anything else
    (``"sqrt(2)"``, ``nan``, ...) raises :class:`ValidationError`.
    """
    if isinstance(x, bool):
        raise ValidationError(f"not a rational number: {x!r}")
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, numbers.Real):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValidationError(f"not a rational number: {x!r}")
        x = repr(float(x))
    if isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational number: {x!r}") from None
        return q.numerator if q.denominator == 1 else q
    raise ValidationError(f"not a rational number: {x!r}")


def common_denominator(values):
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = lcm(d, v.denominator)
    return d


def to_json_number(q):
    """ints stay ints; non-integral rationals become ``"p/q"`` strings."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def simplify(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q
