"""Exact rational linear programming (dense tableau simplex, Bland's rule).

Rows are ``LinRow`` objects meaning ``sum(coeffs[v] * v) + const  REL  0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .numeric.polynomial import Polynomial
from .requirements import Relation


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinRow:
    coeffs: Mapping[int, Fraction]
    const: Fraction
    rel: Relation

    @classmethod
    def of(cls, p: Polynomial, rel: Relation) -> "LinRow":
        if p.degree() > 1:
            raise ValueError("row is not linear")
        return cls(p.linear_coefficients(), p.constant(), rel)

    def value(self, point: Mapping[int, Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.coeffs.items()), self.const)


@dataclass
class LPResult:
    status: LPStatus
    point: dict | None = None
    value: Fraction | None = None


def simplex(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]):
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``.

    Returns ``(status, x, value)``. Two phases with artificial variables;
    Bland's rule (lowest index entering and leaving) prevents cycling.
    """
    m = len(A)
    nv = len(c)
    if m == 0:
        if any(ci < 0 for ci in c):
            return LPStatus.UNBOUNDED, None, None
        return LPStatus.OPTIMAL, [Fraction(0)] * nv, Fraction(0)
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        rows.append(r + [Fraction(0)] * m + [rhs])
        rows[i][nv + i] = Fraction(1)
    basis = [nv + i for i in range(m)]
    width = nv + m

    # phase 1: minimize the sum of artificials
    cost1 = [Fraction(0)] * nv + [Fraction(1)] * m
    _run(rows, basis, cost1, width, allowed=width)
    if _objective(rows, basis, cost1) != 0:
        return LPStatus.INFEASIBLE, None, None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nv:
            for j in range(nv):
                if rows[i][j] != 0:
                    _pivot(rows, basis, i, j)
                    break
    keep = [i for i in range(m) if basis[i] < nv]
    rows = [rows[i][:nv] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    if not rows:
        return simplex([], [], c)

    status = _run(rows, basis, [Fraction(x) for x in c], nv, allowed=nv)
    if status is LPStatus.UNBOUNDED:
        return status, None, None
    x = [Fraction(0)] * nv
    for i, j in enumerate(basis):
        x[j] = rows[i][-1]
    return LPStatus.OPTIMAL, x, sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))


def _objective(rows, basis, cost):
    return sum((cost[j] * rows[i][-1] for i, j in enumerate(basis)), Fraction(0))


def _pivot(rows, basis, r, col, obj=None):
    pr = rows[r]
    pv = pr[col]
    if pv != 1:
        rows[r] = pr = [x / pv if x else x for x in pr]
    nz = [k for k, x in enumerate(pr) if x]
    targets = list(enumerate(rows))
    if obj is not None:
        targets.append((-1, obj))
    for i, row in targets:
        if i != r:
            f = row[col]
            if f:
                for k in nz:
                    row[k] -= f * pr[k]
    basis[r] = col


def _run(rows, basis, cost, width, allowed):
    # reduced-cost row kept in step with the tableau; last entry is -objective
    obj = [Fraction(c) for c in cost[:width]] + [Fraction(0)] * (len(rows[0]) - width - 1) + [Fraction(0)]
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [a - f * b for a, b in zip(obj, rows[i])]
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return LPStatus.OPTIMAL
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return LPStatus.UNBOUNDED
        _pivot(rows, basis, best[1], enter, obj)


def solve_lp(
    rows: Iterable[LinRow],
    objective: Mapping[int, Fraction] | None = None,
    maximize: bool = False,
    nonneg: Iterable[int] = (),
    variables: Iterable[int] = (),
) -> LPResult:
    """Optimize a linear objective over rows (``GT`` treated as ``GEQ``, ``NEQ`` ignored).

    Variables listed in ``nonneg`` are sign-constrained; all others are free.
    """
    rows = [r for r in rows if r.rel is not Relation.NEQ]
    objective = dict(objective or {})
    vs = set(variables) | set(objective)
    for r in rows:
        vs.update(v for v, c in r.coeffs.items() if c)
    order = sorted(vs)
    pos = set(nonneg)
    col: dict[int, tuple[int, int | None]] = {}
    k = 0
    for v in order:
        if v in pos:
            col[v] = (k, None)
            k += 1
        else:
            col[v] = (k, k + 1)
            k += 2
    nslack = sum(1 for r in rows if r.rel is not Relation.EQ)
    width = k + nslack
    A, b = [], []
    s = k
    for r in rows:
        line = [Fraction(0)] * width
        for v, c in r.coeffs.items():
            if not c:
                continue
            p, q = col[v]
            line[p] += c
            if q is not None:
                line[q] -= c
        if r.rel is not Relation.EQ:
            line[s] = Fraction(-1)
            s += 1
        A.append(line)
        b.append(-Fraction(r.const))
    sgn = -1 if maximize else 1
    cost = [Fraction(0)] * width
    for v, c in objective.items():
        p, q = col[v]
        cost[p] += sgn * c
        if q is not None:
            cost[q] -= sgn * c
    status, x, val = simplex(A, b, cost)
    if status is not LPStatus.OPTIMAL:
        return LPResult(status)
    point = {}
    for v in order:
        p, q = col[v]
        point[v] = x[p] - (x[q] if q is not None else 0)
    return LPResult(status, point, sgn * val)


def farkas_multipliers(rows: Sequence[LinRow], strict: bool = False) -> dict[int, Fraction] | None:
    """Multipliers proving the rows infeasible, or None.

    Equality rows get free multipliers, inequality rows nonnegative ones. The
    combination has every variable coefficient zero and constant term -1.
    With ``strict`` the constant may instead be 0 provided the multipliers on
    strict rows sum to 1 (the Motzkin alternative); ``NEQ`` rows never take part.
    """
    active = [i for i, r in enumerate(rows) if r.rel is not Relation.NEQ]
    vs = sorted({v for i in active for v, c in rows[i].coeffs.items() if c})
    cert_rows = []
    for v in vs:
        cert_rows.append(LinRow({i: rows[i].coeffs.get(v, 0) for i in active}, Fraction(0), Relation.EQ))
    nonneg = [i for i in active if rows[i].rel is not Relation.EQ]
    const = {i: rows[i].const for i in active}
    res = solve_lp(cert_rows + [LinRow(const, Fraction(1), Relation.EQ)], nonneg=nonneg, variables=active)
    if res.status is LPStatus.OPTIMAL:
        return _clean(res.point)
    if not strict:
        return None
    gts = [i for i in active if rows[i].rel is Relation.GT]
    if not gts:
        return None
    extra = [
        LinRow({i: -c for i, c in const.items()}, Fraction(0), Relation.GEQ),  # constant <= 0
        LinRow({i: 1 for i in gts}, Fraction(-1), Relation.EQ),
    ]
    res = solve_lp(cert_rows + extra, nonneg=nonneg, variables=active)
    if res.status is LPStatus.OPTIMAL:
        return _clean(res.point)
    return None


def _clean(point: Mapping[int, Fraction]) -> dict[int, Fraction]:
    return {i: v for i, v in sorted(point.items()) if v}
