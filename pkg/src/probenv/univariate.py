"""Exact decision of one-variable polynomial systems on a closed interval.

The line is cut at the real roots of the relevant polynomials; each root and
each open cell between roots is a sample where every row has constant sign.
The same routine serves the solver and the certificate checker, so a checker
re-running it on a claimed residual reproduces the solver's cell list.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numeric.interval import RatInterval
from .numeric.polynomial import Polynomial
from .numeric.rational import sign, simplest_between
from .numeric.sturm import (
    DEFAULT_TOLERANCE,
    _coeffs,
    count_roots_closed,
    isolate_roots,
    sign_at_root,
    square_free,
    sturm_tallies,
    trim,
    uv_eval,
    uv_gcd,
    uv_mul,
)
from .requirements import Relation


@dataclass(frozen=True)
class Cell:
    """A root (``root=True``, isolated by ``where``) or an open-cell sample point."""

    root: bool
    where: RatInterval
    violated: int | None  # first row failing there, None if all rows hold


@dataclass(frozen=True)
class Analysis:
    defining: list  # coefficient list whose roots cut the line
    from_equalities: bool
    tallies: tuple[int, int]
    cells: list[Cell]


def _uv(p: Polynomial, var: int) -> list:
    if p.is_constant():
        return trim([p.constant()])
    if p.variables() != [var]:
        raise ValueError("row is not univariate in the expected variable")
    return trim(p.to_univariate())


def _row_sign(c: list, cell_root: bool, where: RatInterval, defining: list) -> int:
    if len(c) <= 1:
        return sign(c[0]) if c else 0
    if not cell_root or where.lo == where.hi:
        return sign(uv_eval(c, where.lo))
    return sign_at_root(c, defining, where)


def analyze(
    rows: Sequence[tuple[Polynomial, Relation]],
    var: int,
    domain: RatInterval = RatInterval(Fraction(0), Fraction(1)),
    tol: Fraction = DEFAULT_TOLERANCE,
) -> Analysis:
    polys = [(_uv(p, var), rel) for p, rel in rows]
    eqs = [c for c, rel in polys if rel is Relation.EQ and len(c) > 1]
    if eqs:
        g = eqs[0]
        for c in eqs[1:]:
            g = uv_gcd(g, c)
        defining = square_free(g) if len(g) > 1 else g
        from_eq = True
    else:
        defining = [Fraction(1)]
        for c, _ in polys:
            if len(c) > 1:
                defining = uv_mul(defining, c)
        defining = square_free(defining)
        from_eq = False
    cells: list[Cell] = []
    if len(defining) > 1:
        roots = isolate_roots(defining, domain, tol)
        tallies = sturm_tallies(defining, domain)
    else:
        if from_eq and not defining:
            raise ValueError("zero equality row")
        roots = []
        tallies = (0, 0)
    for iv in roots:
        cells.append(Cell(True, iv, _first_violation(polys, True, iv, defining)))
    if not from_eq:
        cuts = [domain.lo] + [p for iv in roots for p in (iv.lo, iv.hi)] + [domain.hi]
        samples = {domain.lo, domain.hi}
        for k in range(0, len(cuts) - 1, 2):
            a, b = cuts[k], cuts[k + 1]
            # a point strictly inside each gap; a shared endpoint is itself a sample
            samples.add(simplest_between((3 * a + b) / 4, (a + 3 * b) / 4) if a < b else a)
        for q in sorted(samples):
            if len(defining) > 1 and uv_eval(defining, q) == 0:
                continue
            where = RatInterval.point(q)
            cells.append(Cell(False, where, _first_violation(polys, False, where, defining)))
        cells.sort(key=lambda c: (c.where.lo, c.root))
    return Analysis(defining, from_eq, tallies, cells)


def _first_violation(polys, is_root, where, defining) -> int | None:
    for k, (c, rel) in enumerate(polys):
        s = _row_sign(c, is_root, where, defining)
        if not rel.holds(s):
            return k
    return None


def closed_root_count(defining: list, domain: RatInterval) -> int:
    return count_roots_closed(defining, domain) if len(defining) > 1 else 0


def satisfying_cell(a: Analysis) -> Cell | None:
    """A cell where every row holds; rational points preferred."""
    ok = [c for c in a.cells if c.violated is None]
    for c in ok:
        if c.where.lo == c.where.hi:
            return c
    return ok[0] if ok else None


__all__ = ["Analysis", "Cell", "analyze", "closed_root_count", "satisfying_cell", "_coeffs"]
