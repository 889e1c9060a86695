"""Exact rational values and bounds.

Bounds are ``Fraction`` or ``INF``.  ``INF`` is ``math.inf``: ``Fraction``
compares against float infinity exactly, and no other float is ever accepted.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from .errors import InvalidBounds, ParseError

INF = math.inf

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction, gmpy2 mpq or ``p/q`` string to ``Fraction``."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return parse_rational(x)
    if type(x).__name__ == "mpq":
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str, allow_decimal: bool = False) -> Fraction:
    s = text.strip()
    if _RATIONAL_RE.match(s):
        try:
            return Fraction(s)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {text!r}") from None
    if allow_decimal and _DECIMAL_RE.match(s):
        return Fraction(s)
    raise ParseError(f"not an exact rational: {text!r}")


def parse_bound(text: str) -> Fraction | float:
    """``p/q``, an integer, or ``inf``."""
    s = text.strip()
    if s.lower() in ("inf", "+inf", "infinity"):
        return INF
    return parse_rational(s)


def format_bound(x) -> str:
    if x == INF:
        return "inf"
    return str(to_fraction(x))


def check_bounds(d_min, d_max) -> tuple[Fraction, Fraction | float]:
    """Validate ``0 <= d_min <= d_max``; ``d_max`` may be ``INF``."""
    try:
        lo = to_fraction(d_min)
    except TypeError as exc:
        raise InvalidBounds(f"d_min must be an exact rational: {exc}") from None
    if isinstance(d_max, float):
        if d_max != INF:
            raise InvalidBounds("the only float bound accepted is +inf")
        hi = INF
    else:
        try:
            hi = to_fraction(d_max)
        except TypeError as exc:
            raise InvalidBounds(f"d_max must be an exact rational or INF: {exc}") from None
    if lo < 0:
        raise InvalidBounds(f"d_min must be nonnegative, got {lo}")
    if lo > hi:
        raise InvalidBounds(f"d_min {lo} exceeds d_max {format_bound(hi)}")
    return lo, hi
