"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable
index with every exponent positive; the empty tuple is the constant monomial.
Variables are plain integers. The ``universe`` tag names the variable space
(``"x"`` for probability terms, ``"y"`` for atoms, ``"u"`` for the solver's
coordinates, ``"z"`` for univariate work) and is checked on arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

Monomial = tuple  # tuple[tuple[int, int], ...]

TERM_LIMIT = 10_000_000


class UniverseError(ValueError):
    pass


class TermLimitError(RuntimeError):
    pass


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def grlex_key(m: Monomial):
    """Sort key putting monomials in graded lexicographic order (largest first)."""
    return (-mono_degree(m), tuple((v, -e) for v, e in m))


def _merge_universe(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise UniverseError(f"cannot combine polynomials over {a!r} and {b!r}")


class Polynomial:
    """Immutable sparse polynomial ``{monomial: coefficient}``."""

    __slots__ = ("terms", "universe", "_hash")

    def __init__(self, terms: Mapping | None = None, universe: str | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms: dict = clean
        self.universe = universe
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c, universe: str | None = None) -> "Polynomial":
        return cls({(): Fraction(c)} if c else {}, universe)

    @classmethod
    def var(cls, i: int, universe: str | None = None) -> "Polynomial":
        return cls({((i, 1),): Fraction(1)}, universe)

    @classmethod
    def linear(cls, coeffs: Mapping[int, Fraction], constant=0, universe: str | None = None):
        terms = {((v, 1),): Fraction(c) for v, c in coeffs.items() if c}
        if constant:
            terms[()] = Fraction(constant)
        return cls._raw(terms, universe)

    @classmethod
    def _raw(cls, terms: dict, universe) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p.universe = universe
        p._hash = None
        return p

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, None)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        uni = _merge_universe(self.universe, other.universe)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, uni)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()}, self.universe)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial._raw({}, self.universe)
        return Polynomial._raw({m: v * c for m, v in self.terms.items()}, self.universe)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        uni = _merge_universe(self.universe, other.universe)
        if len(self.terms) * len(other.terms) > TERM_LIMIT:
            raise TermLimitError("polynomial product exceeds the term-count guard")
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out, uni)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.const(1, self.universe)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, v: int) -> int:
        best = 0
        for m in self.terms:
            for var, e in m:
                if var == v and e > best:
                    best = e
        return best

    def variables(self) -> list[int]:
        vs = set()
        for m in self.terms:
            for v, _ in m:
                vs.add(v)
        return sorted(vs)

    def linear_coefficients(self) -> dict[int, Fraction]:
        """Coefficients of the degree-one monomials."""
        return {m[0][0]: c for m, c in self.terms.items() if len(m) == 1 and m[0][1] == 1}

    def nonlinear_part(self) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if mono_degree(m) >= 2}, self.universe)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    # evaluation ---------------------------------------------------------------
    def __call__(self, point: Mapping[int, Fraction]):
        return self.evaluate(point)

    def evaluate(self, point: Mapping[int, Fraction]):
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                try:
                    t *= point[v] ** e
                except KeyError:
                    raise KeyError(f"unbound variable {v}") from None
            total += t
        return total

    def substitute(self, mapping: Mapping[int, "Polynomial"], universe: str | None = None) -> "Polynomial":
        """Replace variables by polynomials; unmapped variables are kept."""
        uni = universe if universe is not None else self.universe
        cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = mapping[v] ** e
            return cache[key]

        acc: dict = {}
        for m, c in self.terms.items():
            kept = []
            prod = None
            for v, e in m:
                if v in mapping:
                    prod = power(v, e) if prod is None else prod * power(v, e)
                else:
                    kept.append((v, e))
            base = Polynomial._raw({tuple(kept): c}, uni)
            term = base if prod is None else base * prod
            for mm, cc in term.terms.items():
                val = acc.get(mm, 0) + cc
                if val:
                    acc[mm] = val
                else:
                    del acc[mm]
        return Polynomial._raw(acc, uni)

    def rename(self, mapping: Mapping[int, int], universe: str | None = None) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            nm = tuple(sorted((mapping.get(v, v), e) for v, e in m))
            out[nm] = out.get(nm, 0) + c
        return Polynomial(out, universe if universe is not None else self.universe)

    def to_univariate(self) -> list[Fraction]:
        """Dense coefficient list (constant first); at most one variable allowed."""
        vs = self.variables()
        if len(vs) > 1:
            raise ValueError("polynomial is not univariate")
        deg = self.degree()
        coeffs = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[m[0][1] if m else 0] = c
        return coeffs

    @classmethod
    def from_univariate(cls, coeffs: Iterable, var: int = 0, universe: str | None = "z") -> "Polynomial":
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                terms[((var, k),) if k else ()] = Fraction(c)
        return cls._raw(terms, universe)

    # display -------------------------------------------------------------------
    def format(self, namer: Callable[[int], str] | None = None) -> str:
        if namer is None:
            u = self.universe or "v"
            namer = lambda v: f"{u}{v}"  # noqa: E731
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(namer(v) if e == 1 else f"{namer(v)}^{e}" for v, e in m)
            mag = abs(c)
            if not m:
                body = _fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, body in parts[1:]:
            s += f" {sg} {body}"
        return s

    def __repr__(self):
        return f"Polynomial({self.format()})"

    __str__ = format


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def is_identically_zero(p: Polynomial) -> bool:
    return p.is_zero()


def poly_arith(p: Polynomial, q, op: str) -> Polynomial:
    """Functional front end: ``op`` in ``add``, ``sub``, ``mul``, ``scale``."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: Polynomial, point: Mapping[int, Fraction]) -> Fraction:
    return p.evaluate(point)


def divide_exact(f: Polynomial, h: Polynomial) -> Polynomial | None:
    """Return ``q`` with ``f == h*q`` or None if ``h`` does not divide ``f``."""
    if h.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    uni = _merge_universe(f.universe, h.universe)
    lead_m, lead_c = min(h.terms.items(), key=lambda t: _lex_key(t[0]))
    rem = dict(f.terms)
    quot: dict = {}
    while rem:
        m, c = min(rem.items(), key=lambda t: _lex_key(t[0]))
        qm = _mono_div(m, lead_m)
        if qm is None:
            return None
        qc = c / lead_c
        quot[qm] = quot.get(qm, 0) + qc
        for hm, hc in h.terms.items():
            mm = mono_mul(qm, hm)
            v = rem.get(mm, 0) - qc * hc
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return Polynomial(quot, uni)


def _lex_key(m: Monomial):
    # pure lex on exponent vectors (largest first), variables ordered by index
    return tuple((v, -e) for v, e in m) + ((float("inf"), 0),)


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    da = dict(a)
    for v, e in b:
        if da.get(v, 0) < e:
            return None
        da[v] -= e
    return tuple(sorted((v, e) for v, e in da.items() if e))
