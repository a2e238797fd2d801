"""Change of variables from probability terms to atom probabilities.

Each x-variable (the probability of a boolean combination) becomes the sum of
the atom variables ``y[a]`` over its atoms. The resulting system, together with
the normalization row and one nonnegativity row per atom, is feasible exactly
when the requirements are admissible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .events import AtomSet, BooleanExpr, atom_label, atoms_of
from .numeric.interval import RatInterval
from .numeric.polynomial import Polynomial
from .numeric.rational import format_short, sign
from .numeric.sturm import sign_at_root
from .requirements import Relation, RequirementSet


@dataclass(frozen=True)
class Row:
    rel: Relation
    kind: str  # "requirement", "normalization" or "nonnegativity"
    label: str
    xpoly: Polynomial | None = None
    ypoly: Polynomial | None = None
    source: int | None = None  # index into RequirementSet.constraints
    atom: int | None = None


@dataclass
class PolySystem:
    n: int
    rows: list[Row]
    term_atoms: list[AtomSet]  # x_j -> atoms
    atom_labels: list[str]
    x_names: list[str] = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def num_atoms(self) -> int:
        return 1 << self.n

    def x_form(self, j: int) -> Polynomial:
        return Polynomial.linear({a: 1 for a in self.term_atoms[j]}, universe="y")

    def x_substitution(self) -> dict[int, Polynomial]:
        return {j: self.x_form(j) for j in range(len(self.term_atoms))}

    def poly(self, r: int) -> Polynomial:
        """Row ``r`` expanded over the atom variables (cached)."""
        row = self.rows[r]
        if row.ypoly is not None:
            return row.ypoly
        if r not in self._cache:
            self._cache[r] = row.xpoly.substitute(self.x_substitution(), universe="y")
        return self._cache[r]

    def row_indices(self, kind: str) -> list[int]:
        return [i for i, row in enumerate(self.rows) if row.kind == kind]

    @property
    def normalization_row(self) -> int:
        (i,) = self.row_indices("normalization")
        return i

    def y_name(self, a: int) -> str:
        return f"y{a}"

    def expansion_size(self, r: int) -> int:
        """Upper bound on the number of atom monomials row ``r`` expands to."""
        row = self.rows[r]
        if row.ypoly is not None:
            return len(row.ypoly.terms)
        total = 0
        for m in row.xpoly.terms:
            k = 1
            for j, e in m:
                k *= len(self.term_atoms[j]) ** e
            total += k
        return total

    def _row_text(self, i: int, expand: bool) -> str:
        row = self.rows[i]
        if row.ypoly is not None or expand:
            body = self.poly(i).format(self.y_name)
        else:
            body = row.xpoly.format(lambda j: f"x{j}")
        return f"r{i} [{row.kind}] {body} {row.rel.token} 0"

    def format(self, expand_limit: int = 20000) -> str:
        """Stable text form: atom legend, then one row per line (graded-lex order).

        Rows whose atom expansion would exceed ``expand_limit`` monomials are
        printed over the probability terms instead, with an ``x`` legend.
        """
        lines = [f"# atoms: {self.num_atoms}"]
        for a in range(self.num_atoms):
            lines.append(f"# y{a} = {self.atom_labels[a]}")
        expand = [self.expansion_size(i) <= expand_limit for i in range(len(self.rows))]
        if not all(expand):
            for j, s in enumerate(self.term_atoms):
                atoms = " + ".join(f"y{a}" for a in s)
                lines.append(f"# x{j} = {self.x_names[j] if self.x_names else ''} = {atoms}")
        for i in range(len(self.rows)):
            lines.append(self._row_text(i, expand[i]))
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """Hash of the unexpanded system (cheap for any number of events)."""
        lines = [f"n {self.n}"]
        lines += [f"x{j} {s.bits:x}" for j, s in enumerate(self.term_atoms)]
        lines += [self._row_text(i, False) for i in range(len(self.rows))]
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:16]


def atomize(rs: RequirementSet) -> PolySystem:
    n = rs.n
    rows: list[Row] = []
    for i, c in enumerate(rs.constraints):
        rows.append(Row(c.rel, "requirement", f"line {c.source_line}: {c.sugar}", xpoly=c.poly, source=i))
    size = 1 << n
    rows.append(Row(Relation.EQ, "normalization", "sum of atoms", ypoly=Polynomial.linear({a: 1 for a in range(size)}, -1, "y")))
    for a in range(size):
        rows.append(Row(Relation.GEQ, "nonnegativity", f"y{a} >= 0", ypoly=Polynomial.var(a, "y"), atom=a))
    labels = [atom_label(a, rs.events) for a in range(size)]
    return PolySystem(
        n,
        rows,
        [t.atoms for t in rs.prob_terms],
        labels,
        [t.name for t in rs.prob_terms],
    )


# ------------------------------------------------------------------ witnesses
@dataclass(frozen=True)
class Witness:
    """Exact atom distribution."""

    y: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.y)
        object.__setattr__(self, "y", vals)
        if any(v < 0 for v in vals) or sum(vals) != 1:
            raise ValueError("witness must be nonnegative and sum to 1")

    @property
    def n(self) -> int:
        return len(self.y).bit_length() - 1

    def x_values(self, rs: RequirementSet) -> dict[int, Fraction]:
        return {t.index: sum((self.y[a] for a in t.atoms), Fraction(0)) for t in rs.prob_terms}


@dataclass(frozen=True)
class IntervalWitness:
    """Atom probabilities as polynomials in ``z``, at the unique root of
    ``defining`` inside ``interval`` (an isolating interval, Sturm count 1)."""

    y: tuple  # univariate Polynomials in variable 0
    defining: Polynomial
    interval: RatInterval

    def approx(self) -> tuple:
        mid = self.interval.mid
        return tuple(p.evaluate({0: mid}) for p in self.y)


def x_of_witness(w, e: BooleanExpr):
    """Probability of ``e`` under the witness (exact, or a polynomial in z)."""
    n = len(w.y).bit_length() - 1
    atoms = atoms_of(e, n)
    if isinstance(w, IntervalWitness):
        return sum((w.y[a] for a in atoms), Polynomial.const(0, "z"))
    return sum((w.y[a] for a in atoms), Fraction(0))


@dataclass
class Violation:
    constraint: int
    residual: object  # Fraction, or sign for interval witnesses
    message: str


def verify_witness(w, rs: RequirementSet) -> tuple[bool, list[Violation]]:
    """Check every desugared constraint exactly at the witness."""
    if isinstance(w, IntervalWitness):
        return _verify_interval_witness(w, rs)
    if len(w.y) != 1 << rs.n:
        return False, [Violation(-1, None, "witness has the wrong number of atoms")]
    xv = w.x_values(rs)
    bad = []
    for i, c in enumerate(rs.constraints):
        v = c.poly.evaluate(xv)
        if not c.rel.holds(v):
            bad.append(Violation(i, v, f"line {c.source_line} ({c.sugar}): residual {format_short(v)} violates {c.rel.token} 0"))
    return not bad, bad


def _verify_interval_witness(w: IntervalWitness, rs: RequirementSet) -> tuple[bool, list[Violation]]:
    from .numeric.sturm import count_roots_closed

    bad = []
    if len(w.y) != 1 << rs.n:
        return False, [Violation(-1, None, "witness has the wrong number of atoms")]
    if w.interval.lo != w.interval.hi and count_roots_closed(w.defining, w.interval) != 1:
        return False, [Violation(-1, None, "interval does not isolate exactly one root")]
    total = sum(w.y, Polynomial.const(0, "z"))
    checks = [(-1, total - 1, Relation.EQ, "normalization")]
    checks += [(-1, p, Relation.GEQ, f"y{a} >= 0") for a, p in enumerate(w.y)]
    xs = {t.index: sum((w.y[a] for a in t.atoms), Polynomial.const(0, "z")) for t in rs.prob_terms}
    for i, c in enumerate(rs.constraints):
        checks.append((i, c.poly.substitute(xs, universe="z"), c.rel, f"line {c.source_line} ({c.sugar})"))
    for i, q, rel, what in checks:
        s = _sign_at(q, w)
        if not rel.holds(s):
            bad.append(Violation(i, s, f"{what}: sign {s} at the root violates {rel.token} 0"))
    return not bad, bad


def _sign_at(q: Polynomial, w: IntervalWitness) -> int:
    if q.is_constant():
        return sign(q.constant())
    return sign_at_root(q, w.defining, w.interval)


def format_witness(w, rs: RequirementSet) -> str:
    lines = []
    if isinstance(w, IntervalWitness):
        lines.append(f"# z is the unique root of {w.defining.format(lambda v: 'z')} in [{w.interval.lo}, {w.interval.hi}]")
        for a, p in enumerate(w.y):
            lines.append(f"y{a} = {p.format(lambda v: 'z')}    # {rs_atom_label(rs, a)}")
        return "\n".join(lines) + "\n"
    for a, v in enumerate(w.y):
        lines.append(f"y{a} = {format_short(v)}    # {rs_atom_label(rs, a)}")
    return "\n".join(lines) + "\n"


def rs_atom_label(rs: RequirementSet, a: int) -> str:
    return atom_label(a, rs.events)


__all__: Sequence[str] = [
    "IntervalWitness",
    "PolySystem",
    "Row",
    "Violation",
    "Witness",
    "atomize",
    "format_witness",
    "verify_witness",
    "x_of_witness",
]
