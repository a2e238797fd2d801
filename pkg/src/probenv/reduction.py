"""Solver coordinates and equality elimination.

The solver works in coordinates ``u = B y`` where the rows of ``B`` are 0/1
atom sets: first the sure event, then the distinct probability terms in order
(skipping dependent ones), then unit atoms to complete a basis. Every ``u_k``
is then a probability, hence lies in [0, 1], and each requirement row is a
polynomial in ``u`` of its original degree (no expansion of products of atom
sums is needed).

Elimination rewrites the row list by a sequence of logged steps. Each step
keeps the solution set unchanged, and each is checkable on its own:

* ``Subst``: a combination of equality rows equals ``d * (u_v - expr)``; the
  variable is replaced by ``expr`` in every row.
* ``Combine``: a combination of equality rows is appended as a new row.
* ``Divide``: an equality row ``f = h * q`` with ``h`` a ``!=`` or ``>`` row is
  replaced by ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .atomization import PolySystem
from .numeric.polynomial import Polynomial, divide_exact
from .requirements import Relation

URow = tuple  # (Polynomial over "u", Relation)


# ------------------------------------------------------------------ coordinates
@dataclass(frozen=True)
class Coordinates:
    n: int
    bits: tuple  # coordinate k -> bitmask of atoms in its 0/1 form
    inverse: tuple  # atom a -> Polynomial over u equal to y_a

    @property
    def size(self) -> int:
        return len(self.bits)

    def atoms_of(self, k: int) -> list[int]:
        b = self.bits[k]
        return [a for a in range(1 << self.n) if b >> a & 1]

    def y_of(self, mask: int) -> Polynomial:
        acc = Polynomial.const(0, "u")
        for a in range(1 << self.n):
            if mask >> a & 1:
                acc = acc + self.inverse[a]
        return acc


def build_coordinates(sys: PolySystem) -> Coordinates:
    size = sys.num_atoms
    full = (1 << size) - 1
    candidates = [full] + [_mask(s) for s in sys.term_atoms] + [1 << a for a in range(size)]
    kept: list[int] = []
    echelon: dict[int, list] = {}  # pivot column -> reduced dense row
    for m in candidates:
        if len(kept) == size:
            break
        vec = [Fraction(m >> a & 1) for a in range(size)]
        for col in sorted(echelon):
            f = vec[col]
            if f:
                piv = echelon[col]
                vec = [x - f * p for x, p in zip(vec, piv)]
        lead = next((i for i, x in enumerate(vec) if x), None)
        if lead is None:
            continue
        vec = [x / vec[lead] for x in vec]
        for col, row in echelon.items():
            f = row[lead]
            if f:
                echelon[col] = [x - f * p for x, p in zip(row, vec)]
        echelon[lead] = vec
        kept.append(m)
    inverse = _invert(kept, size)
    return Coordinates(sys.n, tuple(kept), tuple(inverse))


def _mask(atomset) -> int:
    return atomset.bits


def _invert(kept: list[int], size: int) -> list[Polynomial]:
    # Gauss-Jordan on [B | I]; B has 0/1 entries
    aug = []
    for k, m in enumerate(kept):
        row = [Fraction(m >> a & 1) for a in range(size)] + [Fraction(int(j == k)) for j in range(size)]
        aug.append(row)
    for col in range(size):
        piv = next(r for r in range(col, size) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * p for x, p in zip(aug[r], aug[col])]
    # row a of B^{-1}: y_a = sum_k Binv[a][k] u_k
    return [Polynomial.linear({k: aug[a][size + k] for k in range(size)}, universe="u") for a in range(size)]


def check_coordinates(c: Coordinates, sys: PolySystem) -> str | None:
    """None when ``inverse`` really inverts ``bits``; otherwise a diagnostic."""
    size = sys.num_atoms
    if c.n != sys.n or len(c.bits) != size or len(c.inverse) != size:
        return "coordinate system has the wrong dimension"
    for k, m in enumerate(c.bits):
        if m <= 0 or m >> size:
            return f"coordinate u{k} is not a nonempty atom set"
        got = c.y_of(m)
        if got != Polynomial.var(k, "u"):
            return f"inverse map does not reproduce u{k}: got {got.format(_u)}"
    return None


def _u(v: int) -> str:
    return f"u{v}"


def x_in_u(c: Coordinates, sys: PolySystem) -> dict[int, Polynomial]:
    index = {m: k for k, m in enumerate(c.bits)}
    out = {}
    for j, s in enumerate(sys.term_atoms):
        m = _mask(s)
        out[j] = Polynomial.var(index[m], "u") if m in index else c.y_of(m)
    return out


def u_rows(c: Coordinates, sys: PolySystem) -> list[URow]:
    """Every row of ``sys`` rewritten over the solver coordinates."""
    xs = x_in_u(c, sys)
    ys = dict(enumerate(c.inverse))
    rows = []
    for row in sys.rows:
        if row.xpoly is not None:
            p = row.xpoly.substitute(xs, universe="u")
        else:
            p = row.ypoly.substitute(ys, universe="u")
        rows.append((p, row.rel))
    return rows


def y_from_u(c: Coordinates, values: dict[int, object]) -> list:
    """Atom values (numbers or polynomials) from coordinate values."""
    return [inv.substitute({k: _as_poly(v) for k, v in values.items()}, universe="z") for inv in c.inverse]


def _as_poly(v):
    if isinstance(v, Polynomial):
        return v
    return Polynomial.const(v, "z")


# ------------------------------------------------------------------ steps
@dataclass(frozen=True)
class Subst:
    var: int
    expr: Polynomial
    combo: tuple  # ((row, coeff), ...)
    scale: Fraction


@dataclass(frozen=True)
class Combine:
    combo: tuple


@dataclass(frozen=True)
class Divide:
    row: int
    by: int
    quotient: Polynomial


Step = Union[Subst, Combine, Divide]


def combination(rows: Sequence[URow], combo) -> Polynomial:
    acc = Polynomial.const(0, "u")
    for r, c in combo:
        acc = acc + rows[r][0].scale(c)
    return acc


def apply_step(rows: list[URow], step: Step) -> tuple[list[URow], str | None]:
    """Check ``step`` against ``rows`` and return the rewritten rows (or a diagnostic)."""
    if isinstance(step, Subst):
        err = _check_combo(rows, step.combo)
        if err:
            return rows, err
        if step.scale == 0:
            return rows, "substitution with zero scale"
        if step.var in step.expr.variables():
            return rows, f"u{step.var} occurs in its own substitution"
        lhs = combination(rows, step.combo)
        rhs = (Polynomial.var(step.var, "u") - step.expr).scale(step.scale)
        if lhs != rhs:
            return rows, f"combination does not equal the substitution; residual {(lhs - rhs).format(_u)}"
        m = {step.var: step.expr}
        return [(p.substitute(m, "u"), rel) for p, rel in rows], None
    if isinstance(step, Combine):
        err = _check_combo(rows, step.combo)
        if err:
            return rows, err
        return rows + [(combination(rows, step.combo), Relation.EQ)], None
    if isinstance(step, Divide):
        if not (0 <= step.row < len(rows) and 0 <= step.by < len(rows)):
            return rows, "row index out of range"
        f, rel = rows[step.row]
        h, hrel = rows[step.by]
        if rel is not Relation.EQ or hrel not in (Relation.NEQ, Relation.GT):
            return rows, "division needs an equality row and a nonvanishing divisor row"
        if h * step.quotient != f:
            return rows, "quotient times divisor does not reproduce the row"
        out = list(rows)
        out[step.row] = (step.quotient, Relation.EQ)
        return out, None
    return rows, f"unknown step {step!r}"


def _check_combo(rows, combo) -> str | None:
    if not combo:
        return "empty combination"
    for r, c in combo:
        if not 0 <= r < len(rows):
            return f"row index {r} out of range"
        if rows[r][1] is not Relation.EQ:
            return f"row {r} is not an equality"
        if c == 0:
            return f"zero coefficient on row {r}"
    return None


def violated_constant(rows: Sequence[URow]) -> int | None:
    for i, (p, rel) in enumerate(rows):
        if p.is_constant() and not rel.holds(p.constant()):
            return i
    return None


# ------------------------------------------------------------------ elimination
@dataclass
class Elimination:
    rows: list[URow]
    steps: list[Step] = field(default_factory=list)
    contradiction: int | None = None

    def substitutions(self) -> list[Subst]:
        return [s for s in self.steps if isinstance(s, Subst)]

    def active_rows(self) -> list[int]:
        """Rows still carrying information (not trivially true constants)."""
        return [i for i, (p, rel) in enumerate(self.rows) if not (p.is_constant() and rel.holds(p.constant()))]

    def variables(self) -> list[int]:
        vs = set()
        for i in self.active_rows():
            vs.update(self.rows[i][0].variables())
        return sorted(vs)


def eliminate(rows: Sequence[URow], max_steps: int = 10_000, nonlinear: bool = True) -> Elimination:
    """Run the elimination ladder until no rule applies.

    Order of preference: a linear equality (lowest row, pivot on its lowest
    variable); a combination of equalities whose nonlinear parts cancel; a
    variable occurring in an equality only as a constant-coefficient degree-one
    term; exact division by a nonvanishing row.
    """
    el = Elimination(list(rows))
    for _ in range(max_steps):
        el.contradiction = violated_constant(el.rows)
        if el.contradiction is not None:
            return el
        step = _linear_step(el.rows)
        if step is None and nonlinear:
            step = _cancel_step(el.rows) or _isolated_step(el.rows) or _divide_step(el.rows)
        if step is None:
            return el
        new, err = apply_step(el.rows, step)
        if err:
            raise AssertionError(f"internal elimination step failed its own check: {err}")
        el.rows = new
        el.steps.append(step)
    return el


def _linear_step(rows) -> Subst | None:
    for i, (p, rel) in enumerate(rows):
        if rel is Relation.EQ and not p.is_constant() and p.degree() == 1:
            coeffs = p.linear_coefficients()
            v = min(coeffs)
            d = coeffs[v]
            expr = (Polynomial.var(v, "u").scale(d) - p).scale(1 / d)
            return Subst(v, expr, ((i, Fraction(1)),), d)
    return None


def _cancel_step(rows) -> Combine | None:
    """Combination of nonlinear equality rows with no nonlinear terms left."""
    pivots: list[tuple] = []  # (monomial, reduced nonlinear part, combo dict)
    existing = {p for p, rel in rows if rel is Relation.EQ}
    for i, (p, rel) in enumerate(rows):
        if rel is not Relation.EQ or p.degree() < 2:
            continue
        nl = p.nonlinear_part()
        combo = {i: Fraction(1)}
        for mono, pnl, pcombo in pivots:
            f = nl.coefficient(mono)
            if f:
                nl = nl - pnl.scale(f)
                for r, c in pcombo.items():
                    combo[r] = combo.get(r, 0) - f * c
        combo = {r: c for r, c in combo.items() if c}
        if nl.is_zero():
            items = tuple(sorted(combo.items()))
            q = combination(rows, items)
            if not q.is_zero() and q not in existing and q.scale(-1) not in existing:
                return Combine(items)
            continue
        mono, lead = nl.sorted_terms()[0]
        pivots.append((mono, nl.scale(1 / lead), {r: c / lead for r, c in combo.items()}))
    return None


def _isolated_step(rows) -> Subst | None:
    for i, (p, rel) in enumerate(rows):
        if rel is not Relation.EQ or p.degree() < 2:
            continue
        lin = p.linear_coefficients()
        for v in sorted(lin):
            if p.degree_in(v) == 1 and all(dict(m).get(v, 0) == 0 or m == ((v, 1),) for m in p.terms):
                d = lin[v]
                expr = (Polynomial.var(v, "u").scale(d) - p).scale(1 / d)
                return Subst(v, expr, ((i, Fraction(1)),), d)
    return None


def _divide_step(rows) -> Divide | None:
    divisors = [j for j, (h, rel) in enumerate(rows) if rel in (Relation.NEQ, Relation.GT) and not h.is_constant()]
    for i, (f, rel) in enumerate(rows):
        if rel is not Relation.EQ or f.degree() < 2:
            continue
        for j in divisors:
            q = divide_exact(f, rows[j][0])
            if q is not None and q.degree() < f.degree():
                return Divide(i, j, q)
    return None


def back_substitute(steps: Sequence[Step], values: dict[int, object], universe: str = "z") -> dict[int, object]:
    """Extend values of the surviving variables through the substitutions.

    Values may be Fractions or polynomials in ``z``; unset variables read as 0.
    """
    vals = dict(values)
    for st in reversed(steps):
        if isinstance(st, Subst):
            vals[st.var] = _eval(st.expr, vals, universe)
    return vals


def _eval(p: Polynomial, vals: dict, universe: str):
    needed = p.variables()
    if any(isinstance(vals.get(v), Polynomial) for v in needed):
        m = {v: _as_poly(vals.get(v, Fraction(0))) for v in needed}
        return p.substitute(m, universe=universe)
    return p.evaluate({v: vals.get(v, Fraction(0)) for v in needed})
