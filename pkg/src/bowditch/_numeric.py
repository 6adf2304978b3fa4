"""Dual-mode scalar helpers.

Characters are either exact (``int`` / ``Fraction``) or binary floats.
Exact values are compared exactly; floats with relative tolerance ``TAU``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, float]

TAU = 1e-9


def is_exact(v) -> bool:
    return isinstance(v, Rational) and not isinstance(v, bool)


_EXACT_TYPES = {int, Fraction}
_FLOAT_TYPE = {float}


def coerce(values):
    """Return ``values`` as all-exact or all-float, rejecting non-finite input."""
    kinds = {type(v) for v in values}
    if kinds <= _EXACT_TYPES:
        return list(values)
    if kinds == _FLOAT_TYPE and all(math.isfinite(v) for v in values):
        return list(values)
    out = []
    exact = all(is_exact(v) for v in values)
    for v in values:
        if isinstance(v, bool):
            raise TypeError("booleans are not coordinates")
        if exact:
            out.append(v if isinstance(v, int) else Fraction(v))
        else:
            f = float(v)
            if not math.isfinite(f):
                raise ValueError(f"non-finite coordinate: {v!r}")
            out.append(f)
    return out


def scale(*vals) -> float:
    return max(1.0, *(abs(float(v)) for v in vals))


def near(a, b) -> bool:
    """Equality: exact for rationals, relative ``TAU`` otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= TAU * scale(a, b)


def is_zero(a, *context) -> bool:
    if is_exact(a):
        return a == 0
    return abs(a) <= TAU * scale(*context) if context else abs(a) <= TAU


def compare_abs(old, new) -> int:
    """Sign of ``|old| - |new|``; 0 when the two are indistinguishable."""
    a, b = abs(old), abs(new)
    if is_exact(a) and is_exact(b):
        return (a > b) - (a < b)
    if abs(a - b) <= TAU * scale(a, b):
        return 0
    return 1 if a > b else -1


def exact_sqrt(q):
    """Square root of a non-negative rational if it is rational, else ``None``."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        r = Fraction(rn, rd)
        return r.numerator if r.denominator == 1 else r
    return None


def sqrt(v):
    """Exact square root when possible, float otherwise."""
    if is_exact(v):
        r = exact_sqrt(v)
        if r is not None:
            return r
    return math.sqrt(v)


def fmt(v) -> str:
    """Render a scalar: fractions exactly, floats with 17 significant digits."""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return f"{float(v):.17g}"
