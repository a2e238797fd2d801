"""Exact rational helpers built on :class:`fractions.Fraction`."""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_INT = re.compile(r"[+-]?\d+\Z")
_FRAC = re.compile(r"([+-]?\d+)\s*/\s*(\d+)\Z")
_DEC = re.compile(r"([+-]?)(\d*)\.(\d*)\Z")


class NumberError(ValueError):
    pass


def parse_number(text: str) -> Fraction:
    """Parse an integer, ``p/q`` fraction or finite decimal exactly.

    >>> parse_number("0.95")
    Fraction(19, 20)
    """
    s = text.strip()
    if _INT.match(s):
        return Fraction(int(s))
    m = _FRAC.match(s)
    if m:
        q = int(m.group(2))
        if q == 0:
            raise NumberError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), q)
    m = _DEC.match(s)
    if m and (m.group(2) or m.group(3)):
        sign = -1 if m.group(1) == "-" else 1
        digits = m.group(2) + m.group(3)
        return sign * Fraction(int(digits), 10 ** len(m.group(3)))
    raise NumberError(f"malformed number {text!r}")


def format_fraction(q: Fraction) -> str:
    """Always ``p/q`` form, as used in certificate and report files."""
    return f"{q.numerator}/{q.denominator}"


def format_short(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def sign(q) -> int:
    return (q > 0) - (q < 0)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    return _simplest_pos(lo, hi)


def _simplest_pos(lo: Fraction, hi: Fraction) -> Fraction:
    # continued-fraction descent, 0 < lo <= hi
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # fl < lo <= hi < fl + 1
    rest = _simplest_pos(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


def round_down(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((q.numerator * scale) // q.denominator, scale)


def round_up(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-q.numerator * scale) // q.denominator), scale)
