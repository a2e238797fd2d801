"""Dutch-book games compiled from infeasibility certificates.

A game is a sum of terms. Each term is a product of factors, and each factor
is a polynomial in copy indicators: ``I(S, j)`` is 1 when copy ``j`` of the
event system lands in atom set ``S``. Indicators of the same copy multiply by
intersecting their atom sets; indicators of different copies stay separate.

Two constructions are offered:

* ``symmetrized``: the whole certificate is lifted to a common degree ``d``
  (padding with the sure event) and every monomial is averaged over all
  placements of its atoms on the ``d`` copies. This is the polarization of
  the certificate identity, so the realized payoff is exactly its constant.
* ``greedy``: each factor of a term gets its own block of fresh copies, with
  no averaging. Smaller, and accepted only after exhaustive checking.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .atomization import PolySystem
from .certificates import (
    ChainCertificate,
    FarkasCertificate,
    PsatzCertificate,
    ReductionCertificate,
    chain_to_farkas,
    verify_certificate,
)
from .numeric.polynomial import Polynomial
from .numeric.rational import format_short
from .requirements import Relation

ENUMERATION_CAP = 1 << 24
SAMPLE_SIZE = 1 << 16
SYMMETRIZED_MAX_DEGREE = 8


class BookKind(Enum):
    WEAK = "weak"
    STRONG = "strong"


class GameError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CopyIndicator:
    copy: int  # 1-based
    atoms: int  # bitmask over atoms

    def __post_init__(self):
        if self.copy < 1:
            raise ValueError("copy index must be at least 1")


class IndicatorPoly:
    """Polynomial in copy indicators; keys are sorted tuples with one indicator per copy."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> "IndicatorPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def ind(cls, atoms: int, copy: int) -> "IndicatorPoly":
        if atoms == 0:
            return cls()
        return cls({(CopyIndicator(copy, atoms),): Fraction(1)})

    def _coerce(self, other):
        return other if isinstance(other, IndicatorPoly) else IndicatorPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return IndicatorPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return IndicatorPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = _mono_mul(k1, k2)
                if k is not None:
                    out[k] = out.get(k, 0) + v1 * v2
        return IndicatorPoly(out)

    __rmul__ = __mul__

    def copies(self) -> set[int]:
        return {ind.copy for k in self.terms for ind in k}

    def is_zero(self) -> bool:
        return not self.terms


def _mono_mul(a: tuple, b: tuple) -> tuple | None:
    by_copy = {i.copy: i.atoms for i in a}
    for i in b:
        if i.copy in by_copy:
            by_copy[i.copy] &= i.atoms
            if not by_copy[i.copy]:
                return None
        else:
            by_copy[i.copy] = i.atoms
    return tuple(CopyIndicator(c, m) for c, m in sorted(by_copy.items()))


@dataclass
class GameTerm:
    role: str  # ideal | cone | monoid | linear-eq | linear-ineq | linear-strict
    label: str
    factors: list[IndicatorPoly]
    believed: str  # "= 0", ">= 0" or "> 0"

    def payoff(self) -> IndicatorPoly:
        out = IndicatorPoly.const(1)
        for f in self.factors:
            out = out * f
        return out


@dataclass
class Game:
    n: int
    terms: list[GameTerm]
    mode: str
    copies_used: int
    nu: int | None = None
    notes: list[str] = field(default_factory=list)

    def payoff(self) -> IndicatorPoly:
        out = IndicatorPoly()
        for t in self.terms:
            out = out + t.payoff()
        return out


# ------------------------------------------------------------------ realized values
@dataclass
class Realization:
    values: set
    outcomes: int
    exhaustive: bool

    @property
    def flag(self) -> str:
        return "exhaustive" if self.exhaustive else "sampled, not proven"


def realized_values(g: Game, cap: int = ENUMERATION_CAP, seed: int = 0) -> Realization:
    """Evaluate the payoff on every joint outcome (each copy lands in one atom)."""
    atoms = 1 << g.n
    d = max(g.copies_used, 1)
    total = atoms**d
    payoff = g.payoff()
    items = list(payoff.terms.items())
    if not items:
        return Realization({Fraction(0)}, total if total <= cap else 0, total <= cap)
    denom = math.lcm(*(c.denominator for _, c in items))
    ints = [(k, int(c * denom)) for k, c in items]
    if total <= cap:
        grid = np.indices((atoms,) * d, dtype=np.int64).reshape(d, -1).T
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        grid = rng.integers(0, atoms, size=(SAMPLE_SIZE, d), dtype=np.int64)
        exhaustive = False
    big = max(abs(c) for _, c in ints) * len(ints) >= 1 << 62
    acc = np.zeros(len(grid), dtype=object if big else np.int64)
    for key, c in ints:
        term = np.ones(len(grid), dtype=np.int64)
        for ind in key:
            term &= (ind.atoms >> grid[:, ind.copy - 1]) & 1
        acc += term.astype(object) * c if big else term * c
    values = {Fraction(int(v), denom) for v in np.unique(acc)}
    return Realization(values, len(grid), exhaustive)


# ------------------------------------------------------------------ ledger
@dataclass
class LedgerEntry:
    label: str
    role: str
    believed: str
    factors: list[str]


@dataclass
class Ledger:
    entries: list[LedgerEntry]
    aggregate: str  # believed value of the whole game
    realized: set
    kind: BookKind | None
    notes: list[str]


def believed_ledger(g: Game, sys: PolySystem | None = None, realization: Realization | None = None) -> Ledger:
    """Term-by-term belief of an evaluator who treats distinct copies as independent."""
    entries = []
    notes = list(g.notes)
    for t in g.terms:
        shown = [_factor_text(f, sys) for f in t.factors]
        entries.append(LedgerEntry(t.label, t.role, t.believed, shown))
    beliefs = {t.believed for t in g.terms}
    if "> 0" in beliefs:
        aggregate = "> 0"
    elif ">= 0" in beliefs:
        aggregate = ">= 0"
    elif beliefs:
        aggregate = "= 0"
    else:
        aggregate = "= 0"
    r = realization or realized_values(g)
    kind = None
    if len(r.values) == 1:
        (v,) = r.values
        if v < 0:
            kind = BookKind.STRONG
            if aggregate == ">= 0":
                notes.append(
                    "believed value is only known to be >= 0 (inequality rows present) while the realized "
                    f"payoff is {format_short(v)}; the evaluator does not necessarily see the game as fair"
                )
        elif v == 0 and aggregate == "> 0":
            kind = BookKind.WEAK
    if not r.exhaustive:
        notes.append("realized values were sampled, not proven")
        kind = None
    if kind is None and r.exhaustive:
        notes.append("realized payoff is not a book for this belief; game rejected")
    return Ledger(entries, aggregate, r.values, kind, notes)


def _factor_text(f: IndicatorPoly, sys: PolySystem | None) -> str:
    return format_indicator_poly(f, sys)


def format_indicator_poly(p: IndicatorPoly, sys: PolySystem | None = None, names=None) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, c in sorted(p.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
        mono = "*".join(f"{_set_name(i.atoms, sys, names)}@{i.copy}" for i in k)
        mag = abs(c)
        if not mono:
            body = format_short(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_short(mag)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, body in parts[1:]:
        s += f" {sg} {body}"
    return s


def _set_name(mask: int, sys: PolySystem | None, names) -> str:
    if names and mask in names:
        return names[mask]
    if sys is not None:
        for j, s in enumerate(sys.term_atoms):
            if s.bits == mask and sys.x_names:
                name = sys.x_names[j][2:-1]
                return f"[{name}]" if " " in name else name
        atoms = [a for a in range(sys.num_atoms) if mask >> a & 1]
        if len(atoms) == 1:
            return f"[{sys.atom_labels[atoms[0]]}]"
    return f"{{{mask:#x}}}"


# ------------------------------------------------------------------ construction
def build_game(cert, sys: PolySystem, mode: str = "greedy") -> Game:
    if mode not in ("greedy", "symmetrized"):
        raise GameError(f"unknown mode {mode!r}")
    if isinstance(cert, ReductionCertificate):
        raise GameError(
            "reduction certificates have no direct game translation; "
            "supply a Farkas, chain or Positivstellensatz certificate"
        )
    ok, why = verify_certificate(cert, sys)
    if not ok:
        raise GameError(f"certificate does not verify: {why}")
    if isinstance(cert, ChainCertificate):
        cert = chain_to_farkas(cert)
    if isinstance(cert, FarkasCertificate):
        return _linear_game(cert, sys)
    if isinstance(cert, PsatzCertificate):
        parts = _psatz_parts(cert, sys)
        if mode == "symmetrized":
            return _symmetrized(parts, sys)
        return _greedy(parts, sys)
    raise GameError(f"no game construction for {type(cert).__name__}")


def _lift(p: Polynomial, copy: int) -> IndicatorPoly:
    """Linear polynomial in atom variables -> indicators of one copy."""
    out = IndicatorPoly()
    for m, c in p.terms.items():
        if not m:
            out = out + IndicatorPoly.const(c)
        else:
            ((a, e),) = m
            if e != 1:
                raise GameError("linear lift of a nonlinear polynomial")
            out = out + IndicatorPoly.ind(1 << a, copy) * c
    return out


def _linear_game(cert: FarkasCertificate, sys: PolySystem) -> Game:
    scale = Fraction(1) if cert.target == 0 else 1 / abs(cert.target)
    terms = []
    for r, c in cert.coefficients:
        rel = sys.rows[r].rel
        believed = {Relation.EQ: "= 0", Relation.GEQ: ">= 0", Relation.GT: "> 0"}[rel]
        role = {Relation.EQ: "ideal", Relation.GEQ: "cone", Relation.GT: "cone"}[rel]
        f = _lift(sys.poly(r), 1)
        terms.append(GameTerm(role, f"{format_short(c * scale)} * row {r} ({sys.rows[r].label})", [IndicatorPoly.const(c * scale), f], believed))
    return Game(sys.n, terms, "linear", 1, nu=1)


@dataclass
class _Part:
    role: str
    label: str
    factors: list[Polynomial]  # over atom variables
    believed: str


def _psatz_parts(cert: PsatzCertificate, sys: PolySystem) -> list[_Part]:
    parts = []
    for t, r in cert.ideal:
        parts.append(_Part("ideal", f"t * row {r}", [t, sys.poly(r)], "= 0"))
    for J, sos in cert.cone:
        for w, q in sos:
            fs = [Polynomial.const(w, "y"), q, q] + [sys.poly(r) for r in J]
            parts.append(_Part("cone", f"{format_short(w)} * q^2 * rows {list(J)}", fs, ">= 0"))
    fs = []
    for r, k in cert.monoid:
        fs += [sys.poly(r)] * k
    parts.append(_Part("monoid", "product of even powers of rows " + str([r for r, _ in cert.monoid]), fs or [Polynomial.const(1, "y")], "> 0"))
    return parts


def _greedy(parts: list[_Part], sys: PolySystem) -> Game:
    terms = []
    used = 0
    for part in parts:
        copy = 1
        factors = []
        for f in part.factors:
            lifted, width = _lift_block(f, copy)
            factors.append(lifted)
            copy += width
        used = max(used, copy - 1)
        terms.append(GameTerm(part.role, part.label, factors, part.believed))
    return Game(sys.n, terms, "greedy", used, nu=_nu(parts))


def _lift_block(f: Polynomial, first: int) -> tuple[IndicatorPoly, int]:
    """Each monomial of ``f`` places its atom factors on copies first, first+1, ..."""
    out = IndicatorPoly()
    width = 0
    for m, c in f.terms.items():
        atoms = [a for a, e in m for _ in range(e)]
        width = max(width, len(atoms))
        term = IndicatorPoly.const(c)
        for k, a in enumerate(atoms):
            term = term * IndicatorPoly.ind(1 << a, first + k)
        out = out + term
    return out, width


def _nu(parts: list[_Part]) -> int:
    """Sum over atoms of the largest power met in any expanded term."""
    best: dict[int, int] = {}
    for part in parts:
        prod = Polynomial.const(1, "y")
        for f in part.factors:
            prod = prod * f
        for m in prod.terms:
            for a, e in m:
                best[a] = max(best.get(a, 0), e)
    return sum(best.values())


def _symmetrized(parts: list[_Part], sys: PolySystem) -> Game:
    expanded = []
    for part in parts:
        prod = Polynomial.const(1, "y")
        for f in part.factors:
            prod = prod * f
        expanded.append(prod)
    d = max((p.degree() for p in expanded), default=0)
    d = max(d, 1)
    if d > SYMMETRIZED_MAX_DEGREE:
        raise GameError(f"symmetrized game needs {d} copies; limit is {SYMMETRIZED_MAX_DEGREE}")
    atoms = 1 << sys.n
    if atoms**d > ENUMERATION_CAP:
        raise GameError(f"symmetrized game needs {d} copies; (2^{sys.n})^{d} outcomes exceed the enumeration cap")
    terms = []
    for part, prod in zip(parts, expanded):
        out = IndicatorPoly()
        for m, c in prod.terms.items():
            seq = [a for a, e in m for _ in range(e)]
            placements = list(itertools.permutations(range(1, d + 1), len(seq)))
            w = c / len(placements)
            for place in placements:
                term = IndicatorPoly.const(w)
                for a, copy in zip(seq, place):
                    term = term * IndicatorPoly.ind(1 << a, copy)
                out = out + term
        terms.append(GameTerm(part.role, part.label, [out], part.believed))
    return Game(sys.n, terms, "symmetrized", d, nu=_nu(parts))


def game_from_terms(n: int, terms: Iterable[GameTerm], mode: str = "manual") -> Game:
    """Assemble a hand-built game (copies as chosen by the caller)."""
    terms = list(terms)
    used = max((c for t in terms for f in t.factors for c in f.copies()), default=1)
    return Game(n, terms, mode, used)


def indicator_of(sys: PolySystem, atoms_bits: int, copy: int) -> IndicatorPoly:
    return IndicatorPoly.ind(atoms_bits, copy)


__all__: Sequence[str] = [
    "BookKind",
    "CopyIndicator",
    "Game",
    "GameError",
    "GameTerm",
    "IndicatorPoly",
    "Ledger",
    "Realization",
    "believed_ledger",
    "build_game",
    "format_indicator_poly",
    "game_from_terms",
    "realized_values",
]
