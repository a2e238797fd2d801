"""Univariate root counting and isolation with Sturm sequences.

Dense coefficient lists hold exact fractions, constant term first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .interval import RatInterval
from .polynomial import Polynomial
from .rational import sign, simplest_between

DEFAULT_TOLERANCE = Fraction(1, 10**12)

Coeffs = list  # list[Fraction]


def trim(c: Sequence) -> Coeffs:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return c


def uv_eval(c: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def uv_deriv(c: Sequence) -> Coeffs:
    return trim([k * c[k] for k in range(1, len(c))])


def uv_divmod(a: Sequence, b: Sequence) -> tuple[Coeffs, Coeffs]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lead
        q[k] = f
        for i, bc in enumerate(b):
            r[i + k] -= f * bc
        r = trim(r)
    return trim(q), r


def uv_mul(a: Sequence, b: Sequence) -> Coeffs:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def uv_gcd(a: Sequence, b: Sequence) -> Coeffs:
    """Monic greatest common divisor."""
    a, b = trim(a), trim(b)
    while b:
        _, r = uv_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[-1] for x in a]


def square_free(c: Sequence) -> Coeffs:
    c = trim(c)
    g = uv_gcd(c, uv_deriv(c))
    if len(g) <= 1:
        return c
    q, _ = uv_divmod(c, g)
    return q


def _coeffs(p) -> Coeffs:
    if isinstance(p, Polynomial):
        return trim(p.to_univariate())
    return trim(p)


def _sign_normalized(c: Coeffs) -> Coeffs:
    return [-x for x in c] if c and c[-1] < 0 else c


def sturm_chain(c: Sequence) -> list[Coeffs]:
    """Sturm chain on coefficient lists; leading coefficient made positive."""
    c = _sign_normalized(trim(c))
    if not c:
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [c]
    d = uv_deriv(c)
    if not d:
        return seq
    seq.append(d)
    while True:
        _, r = uv_divmod(seq[-2], seq[-1])
        if not r:
            return seq
        seq.append([-x for x in r])


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm sequence ``p, p', -rem(p, p'), ...`` of a univariate polynomial.

    ``p`` is first scaled by -1 if needed so its leading coefficient is positive;
    this does not change roots or sign-variation counts.
    """
    var = p.variables()[0] if p.variables() else 0
    return [Polynomial.from_univariate(c, var, p.universe) for c in sturm_chain(_coeffs(p))]


def sign_variations(chain: Sequence[Sequence], x) -> int:
    signs = [s for s in (sign(uv_eval(c, x)) for c in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _deflate_root(c: Coeffs, r: Fraction) -> Coeffs:
    q, rem = uv_divmod(c, [-r, Fraction(1)])
    assert not rem
    return q


def count_roots(p, iv: RatInterval) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``.

    If ``p`` vanishes at an endpoint, that rational root is divided out before
    the sign-variation count, then ``hi`` is added back when it is a root.
    """
    c = square_free(_coeffs(p))
    if not c:
        raise ValueError("root count of the zero polynomial")
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        return 0
    extra = 0
    if uv_eval(c, hi) == 0:
        c = _deflate_root(c, hi)
        extra = 1
    if uv_eval(c, lo) == 0:
        c = _deflate_root(c, lo)
    chain = sturm_chain(c)
    return sign_variations(chain, lo) - sign_variations(chain, hi) + extra


def count_roots_closed(p, iv: RatInterval) -> int:
    c = square_free(_coeffs(p))
    at_lo = 1 if uv_eval(c, iv.lo) == 0 else 0
    if iv.lo == iv.hi:
        return at_lo
    return count_roots(c, iv) + at_lo


def sturm_tallies(p, iv: RatInterval) -> tuple[int, int]:
    """Sign variations of the square-free Sturm chain at both endpoints."""
    chain = sturm_chain(square_free(_coeffs(p)))
    return sign_variations(chain, iv.lo), sign_variations(chain, iv.hi)


def root_bound(p) -> Fraction:
    """Cauchy bound: every real root lies in ``[-B, B]``."""
    c = _coeffs(p)
    lead = abs(c[-1])
    return 1 + max((abs(x) / lead for x in c[:-1]), default=Fraction(0))


def isolate_roots(p, iv: RatInterval, tol: Fraction = DEFAULT_TOLERANCE) -> list[RatInterval]:
    """Disjoint intervals inside ``iv``, one per distinct root, each of width <= tol.

    Rational roots met during bisection (or found as the simplest rational of a
    final interval) are returned as degenerate point intervals.
    """
    c = square_free(_coeffs(p))
    if not c:
        raise ValueError("root isolation of the zero polynomial")
    chain = sturm_chain(c)

    def count(lo, hi):
        if uv_eval(c, lo) and uv_eval(c, hi):
            return sign_variations(chain, lo) - sign_variations(chain, hi)
        return count_roots(c, RatInterval(lo, hi))

    found: list[RatInterval] = []
    if uv_eval(c, iv.lo) == 0:
        found.append(RatInterval.point(iv.lo))
    stack = [(iv.lo, iv.hi)] if iv.lo < iv.hi else []
    while stack:
        lo, hi = stack.pop()
        k = count(lo, hi)
        if k == 0:
            continue
        if k == 1 and uv_eval(c, hi) == 0:
            found.append(RatInterval.point(hi))
            continue
        if k == 1 and hi - lo <= tol:
            found.append(_tighten(c, lo, hi))
            continue
        m = (lo + hi) / 2
        stack.append((m, hi))
        stack.append((lo, m))
    found.sort(key=lambda r: r.lo)
    return found


def _tighten(c: Coeffs, lo: Fraction, hi: Fraction) -> RatInterval:
    q = simplest_between(lo, hi)
    if uv_eval(c, q) == 0:
        return RatInterval.point(q)
    return RatInterval(lo, hi)


def refine_root(p, iv: RatInterval, width: Fraction) -> RatInterval:
    """Shrink an isolating interval of a single root to at most ``width``."""
    c = square_free(_coeffs(p))
    lo, hi = iv.lo, iv.hi
    if lo == hi:
        return iv
    while hi - lo > width:
        m = (lo + hi) / 2
        if uv_eval(c, m) == 0:
            return RatInterval.point(m)
        if count_roots(c, RatInterval(lo, m)) >= 1:
            hi = m
        else:
            lo = m
    return RatInterval(lo, hi)


def sign_at_root(q, p, iv: RatInterval) -> int:
    """Sign of ``q`` at the unique root of ``p`` isolated in the closed interval ``iv``."""
    qc, pc = _coeffs(q), square_free(_coeffs(p))
    if iv.lo == iv.hi:
        return sign(uv_eval(qc, iv.lo))
    if not qc:
        return 0
    enc = _horner_interval(qc, iv)
    if enc.lo > 0 or enc.hi < 0:
        return 1 if enc.lo > 0 else -1
    g = uv_gcd(pc, qc)
    if len(g) > 1 and count_roots_closed(g, iv) >= 1:
        return 0
    while count_roots_closed(qc, iv) > 0:
        iv = refine_root(pc, iv, iv.width / 2)
        if iv.lo == iv.hi:
            return sign(uv_eval(qc, iv.lo))
    return sign(uv_eval(qc, iv.lo))


def _horner_interval(c: Coeffs, iv: RatInterval) -> RatInterval:
    acc = RatInterval.point(0)
    for a in reversed(c):
        acc = acc * iv + RatInterval.point(a)
    return acc
