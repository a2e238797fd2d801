"""Closed intervals with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .polynomial import Polynomial
from .rational import round_down, round_up

# endpoints whose numerator or denominator grows past this are widened outward
MAX_ENDPOINT_BITS = 512
_ROUND_BITS = 256


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q) -> "RatInterval":
        q = Fraction(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other: "RatInterval") -> "RatInterval":
        return self + (-other)

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(ps), max(ps))

    def scale(self, c: Fraction) -> "RatInterval":
        a, b = self.lo * c, self.hi * c
        return RatInterval(min(a, b), max(a, b))

    def __pow__(self, k: int) -> "RatInterval":
        if k == 0:
            return RatInterval.point(1)
        a, b = self.lo ** k, self.hi ** k
        if k % 2:
            return RatInterval(a, b)
        if self.lo >= 0:
            return RatInterval(a, b)
        if self.hi <= 0:
            return RatInterval(b, a)
        return RatInterval(Fraction(0), max(a, b))

    def simplified(self) -> "RatInterval":
        """Widen outward to dyadic endpoints when the bit size gets large."""
        lo, hi = self.lo, self.hi
        if _too_big(lo):
            lo = round_down(lo, _ROUND_BITS)
        if _too_big(hi):
            hi = round_up(hi, _ROUND_BITS)
        if lo is self.lo and hi is self.hi:
            return self
        return RatInterval(lo, hi)

    def split(self) -> tuple["RatInterval", "RatInterval"]:
        m = self.mid
        return RatInterval(self.lo, m), RatInterval(m, self.hi)


def _too_big(q: Fraction) -> bool:
    return q.denominator.bit_length() > MAX_ENDPOINT_BITS or q.numerator.bit_length() > MAX_ENDPOINT_BITS


def interval_eval(p: Polynomial, box: Mapping[int, RatInterval]) -> RatInterval:
    """Sound enclosure of ``p`` over ``box`` (natural interval extension)."""
    lo = hi = Fraction(0)
    for m, c in p.terms.items():
        t = RatInterval.point(c)
        for v, e in m:
            try:
                iv = box[v]
            except KeyError:
                raise KeyError(f"unbound variable {v}") from None
            t = t * (iv ** e)
        lo += t.lo
        hi += t.hi
    return RatInterval(lo, hi).simplified()
