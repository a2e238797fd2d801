"""Infeasibility certificates and their exact checkers.

A certificate is checked against a row source: either a ``PolySystem``
(rows over atom variables) or a plain list of ``(Polynomial, Relation)``
pairs. Checking never consults the solver; it only expands polynomials and
compares them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .atomization import PolySystem
from .numeric.interval import RatInterval, interval_eval
from .numeric.polynomial import Polynomial
from .numeric.rational import format_fraction, parse_number
from .reduction import (
    Combine,
    Coordinates,
    Divide,
    Subst,
    _invert,
    apply_step,
    check_coordinates,
    u_rows,
)
from .requirements import Relation
from .univariate import analyze


class CertificateError(ValueError):
    pass


# ------------------------------------------------------------------ types
@dataclass(frozen=True)
class FarkasCertificate:
    """``sum(coefficients[r] * row_r)`` is the constant ``target``.

    ``target < 0``; or ``target == 0`` when some strict row has a positive
    coefficient (the strict form of the alternative).
    """

    coefficients: tuple  # ((row, coeff), ...)
    target: Fraction


@dataclass(frozen=True)
class ChainCertificate:
    """``sum(c_k * row_k) == a1 - an`` with ``a1 < an``."""

    terms: tuple  # ((row, coeff), ...)
    a1: Fraction
    an: Fraction


@dataclass(frozen=True)
class PsatzCertificate:
    """``F + G + H == 0`` with F in the ideal, G in the cone, H in the monoid."""

    ideal: tuple  # ((Polynomial t_r, row r), ...)
    cone: tuple  # ((rows J, ((weight, Polynomial q), ...)), ...)
    monoid: tuple  # ((row, even power), ...)


@dataclass(frozen=True)
class Cell:
    root: bool
    interval: RatInterval
    violated: int


@dataclass(frozen=True)
class SturmCertificate:
    """Every root and open cell of the residual line violates some row."""

    var: int
    polynomial: Polynomial  # the cutting polynomial over z
    interval: RatInterval
    tallies: tuple
    cells: tuple

    @property
    def root_count(self) -> int:
        return sum(1 for c in self.cells if c.root)


@dataclass(frozen=True)
class PruneLeaf:
    row: int


@dataclass(frozen=True)
class PruneSplit:
    var: int
    at: Fraction
    low: "PruneNode"
    high: "PruneNode"


PruneNode = Union[PruneLeaf, PruneSplit]


@dataclass(frozen=True)
class PruneCertificate:
    """Split tree over ``[0,1]^vars``; each leaf box provably violates its row."""

    vars: tuple
    tree: PruneNode


@dataclass(frozen=True)
class ReductionCertificate:
    """Coordinate change, logged elimination steps, and a certificate for the result."""

    coords: Coordinates
    steps: tuple
    inner: object


Certificate = Union[
    FarkasCertificate, ChainCertificate, PsatzCertificate, SturmCertificate, PruneCertificate, ReductionCertificate
]


# ------------------------------------------------------------------ row access
class _Rows:
    def __init__(self, source):
        self.source = source

    def __len__(self):
        if isinstance(self.source, PolySystem):
            return len(self.source.rows)
        return len(self.source)

    def get(self, i: int) -> tuple[Polynomial, Relation]:
        if not 0 <= i < len(self):
            raise CertificateError(f"row index {i} out of range")
        if isinstance(self.source, PolySystem):
            return self.source.poly(i), self.source.rows[i].rel
        return self.source[i]


# ------------------------------------------------------------------ checking
def verify_certificate(cert, sys) -> tuple[bool, str]:
    """Exact check of ``cert`` against ``sys``; returns (ok, diagnostic)."""
    try:
        _check(cert, sys)
    except CertificateError as e:
        return False, str(e)
    return True, "ok"


def _check(cert, sys) -> None:
    if isinstance(cert, FarkasCertificate):
        _check_farkas(cert, _Rows(sys))
    elif isinstance(cert, ChainCertificate):
        _check_chain(cert, _Rows(sys))
    elif isinstance(cert, PsatzCertificate):
        _check_psatz(cert, _Rows(sys))
    elif isinstance(cert, SturmCertificate):
        _check_sturm(cert, _Rows(sys))
    elif isinstance(cert, PruneCertificate):
        _check_prune(cert, _Rows(sys))
    elif isinstance(cert, ReductionCertificate):
        _check_reduction(cert, sys)
    else:
        raise CertificateError(f"unknown certificate type {type(cert).__name__}")


def _combine(rows: _Rows, terms, name: str) -> Polynomial:
    acc = Polynomial.const(0)
    seen = set()
    for r, c in terms:
        if r in seen:
            raise CertificateError(f"row {r} listed twice")
        seen.add(r)
        p, rel = rows.get(r)
        if c == 0:
            raise CertificateError(f"zero {name} on row {r}")
        if rel is Relation.NEQ:
            raise CertificateError(f"row {r} is a '!=' row and cannot enter a linear combination")
        if rel is not Relation.EQ and c < 0:
            raise CertificateError(f"negative {name} {format_fraction(c)} on inequality row {r}")
        acc = acc + p.scale(c)
    return acc


def _check_farkas(cert: FarkasCertificate, rows: _Rows) -> None:
    if not cert.coefficients:
        raise CertificateError("empty combination")
    total = _combine(rows, cert.coefficients, "coefficient")
    if not total.is_constant() or total.constant() != cert.target:
        raise CertificateError(
            f"combination is {total.format()}, not the claimed constant {format_fraction(cert.target)}"
        )
    if cert.target > 0:
        raise CertificateError("target constant is positive")
    if cert.target == 0:
        strict = [r for r, c in cert.coefficients if rows.get(r)[1] is Relation.GT and c > 0]
        if not strict:
            raise CertificateError("zero target needs a strict row with a positive coefficient")


def _check_chain(cert: ChainCertificate, rows: _Rows) -> None:
    if not cert.a1 < cert.an:
        raise CertificateError("chain endpoints must satisfy a1 < an")
    total = _combine(rows, cert.terms, "chain coefficient")
    want = cert.a1 - cert.an
    if total != Polynomial.const(want):
        raise CertificateError(f"chain sums to {total.format()}, expected {format_fraction(want)}")


def chain_to_farkas(c: ChainCertificate, sys=None) -> FarkasCertificate:
    """Rescale a chain so the combination equals -1."""
    if not c.a1 < c.an:
        raise CertificateError("degenerate chain: a1 must be below an")
    if sys is not None:
        ok, why = verify_certificate(c, sys)
        if not ok:
            raise CertificateError(f"chain does not verify: {why}")
    k = 1 / (c.an - c.a1)
    return FarkasCertificate(tuple((r, v * k) for r, v in c.terms), Fraction(-1))


def assemble_psatz(cert: PsatzCertificate, rows) -> tuple[Polynomial, Polynomial, Polynomial]:
    """The three parts ``F``, ``G``, ``H`` of a Positivstellensatz identity."""
    rows = rows if isinstance(rows, _Rows) else _Rows(rows)
    F = Polynomial.const(0)
    for t, r in cert.ideal:
        p, rel = rows.get(r)
        if rel is not Relation.EQ:
            raise CertificateError(f"ideal part uses row {r}, which is not an equality")
        F = F + t * p
    G = Polynomial.const(0)
    for J, sos in cert.cone:
        if not sos:
            raise CertificateError("empty sum of squares in cone part")
        prod = Polynomial.const(1)
        for r in J:
            p, rel = rows.get(r)
            if rel not in (Relation.GEQ, Relation.GT):
                raise CertificateError(f"cone part uses row {r}, which is not an inequality")
            prod = prod * p
        s = Polynomial.const(0)
        for w, q in sos:
            if w <= 0:
                raise CertificateError(f"sum-of-squares weight {format_fraction(w)} is not positive")
            s = s + (q * q).scale(w)
        G = G + s * prod
    H = Polynomial.const(1)
    for r, k in cert.monoid:
        p, rel = rows.get(r)
        if rel not in (Relation.NEQ, Relation.GT):
            raise CertificateError(f"monoid part uses row {r}, which is not a '!=' or '>' row")
        if k <= 0 or k % 2:
            raise CertificateError(f"monoid power {k} on row {r} is not a positive even integer")
        H = H * p**k
    return F, G, H


def _check_psatz(cert: PsatzCertificate, rows: _Rows) -> None:
    F, G, H = assemble_psatz(cert, rows)
    total = F + G + H
    if not total.is_zero():
        lead = total.sorted_terms()[0]
        raise CertificateError(
            f"F + G + H is not zero ({len(total.terms)} terms left, leading "
            f"{Polynomial({lead[0]: lead[1]}, total.universe).format()})"
        )


def _check_sturm(cert: SturmCertificate, rows: _Rows) -> None:
    live = [rows.get(i) for i in range(len(rows))]
    for i, (p, _) in enumerate(live):
        if not p.is_constant() and p.variables() != [cert.var]:
            raise CertificateError(f"row {i} is not univariate in the certified variable")
    try:
        a = analyze(live, cert.var, cert.interval)
    except ValueError as e:
        raise CertificateError(str(e)) from None
    got = Polynomial.from_univariate(a.defining, 0, "z")
    if got != cert.polynomial:
        raise CertificateError(f"cutting polynomial is {got.format()}, not {cert.polynomial.format()}")
    if tuple(a.tallies) != tuple(cert.tallies):
        raise CertificateError(f"sign-variation tallies are {a.tallies}, not {tuple(cert.tallies)}")
    if len(a.cells) != len(cert.cells):
        raise CertificateError("cell list does not match the root partition")
    for mine, theirs in zip(a.cells, cert.cells):
        if mine.violated is None:
            raise CertificateError(f"every row holds at the cell near {format_fraction(mine.where.lo)}")
        if mine.root != theirs.root or mine.violated != theirs.violated:
            raise CertificateError(f"cell near {format_fraction(mine.where.lo)} does not match")


def interval_violates(p: Polynomial, rel: Relation, box: dict) -> bool:
    iv = interval_eval(p, box)
    if rel is Relation.EQ:
        return not iv.contains_zero()
    if rel is Relation.GEQ:
        return iv.hi < 0
    if rel is Relation.GT:
        return iv.hi <= 0
    return iv.lo == iv.hi == 0


def _check_prune(cert: PruneCertificate, rows: _Rows) -> None:
    box = {v: RatInterval(Fraction(0), Fraction(1)) for v in cert.vars}
    for i in range(len(rows)):
        p, _ = rows.get(i)
        if not set(p.variables()) <= set(cert.vars):
            raise CertificateError(f"row {i} uses a variable outside the certified box")
    stack = [(cert.tree, box)]
    while stack:
        node, b = stack.pop()
        if isinstance(node, PruneLeaf):
            p, rel = rows.get(node.row)
            if not interval_violates(p, rel, b):
                raise CertificateError(f"leaf row {node.row} is not violated on its box")
            continue
        iv = b.get(node.var)
        if iv is None or not iv.lo < node.at < iv.hi:
            raise CertificateError("split point outside its box")
        lo = dict(b)
        lo[node.var] = RatInterval(iv.lo, node.at)
        hi = dict(b)
        hi[node.var] = RatInterval(node.at, iv.hi)
        stack.append((node.high, hi))
        stack.append((node.low, lo))


def _check_reduction(cert: ReductionCertificate, sys) -> None:
    if not isinstance(sys, PolySystem):
        raise CertificateError("a reduction certificate needs the atomized system")
    # the [0,1] box for coordinates rests on these rows being present
    if len(sys.row_indices("normalization")) != 1 or len(sys.row_indices("nonnegativity")) != sys.num_atoms:
        raise CertificateError("system lacks normalization or nonnegativity rows")
    why = check_coordinates(cert.coords, sys)
    if why:
        raise CertificateError(why)
    rows = u_rows(cert.coords, sys)
    for k, st in enumerate(cert.steps):
        rows, err = apply_step(rows, st)
        if err:
            raise CertificateError(f"step {k}: {err}")
    _check(cert.inner, rows)


# ------------------------------------------------------------------ text format
_MONO = re.compile(r"([a-z])(\d+)(?:\^(\d+))?")


def poly_tokens(p: Polynomial) -> str:
    u = p.universe or "v"
    if p.is_zero():
        return "0:1"
    out = []
    for m, c in p.sorted_terms():
        mono = "*".join(f"{u}{v}" + (f"^{e}" if e > 1 else "") for v, e in m) or "1"
        out.append(f"{format_fraction(c)}:{mono}")
    return " ".join(out)


def parse_poly_tokens(text: str, universe: str) -> Polynomial:
    terms: dict = {}
    for tok in text.split():
        coef, _, mono = tok.partition(":")
        c = parse_number(coef)
        if mono == "1":
            key = ()
        else:
            parts = []
            for f in mono.split("*"):
                m = _MONO.fullmatch(f)
                if not m:
                    raise CertificateError(f"bad monomial {f!r}")
                parts.append((int(m.group(2)), int(m.group(3) or 1)))
            key = tuple(sorted(parts))
        terms[key] = terms.get(key, 0) + c
    return Polynomial(terms, universe)


def _pairs(items) -> str:
    return " ".join(f"{r}:{format_fraction(c)}" for r, c in items)


def _parse_pairs(text: str) -> tuple:
    out = []
    for tok in text.split():
        r, _, c = tok.partition(":")
        out.append((int(r), parse_number(c)))
    return tuple(out)


def kind_of(cert) -> str:
    return {
        FarkasCertificate: "farkas",
        ChainCertificate: "chain",
        PsatzCertificate: "psatz",
        SturmCertificate: "sturm",
        PruneCertificate: "prune",
        ReductionCertificate: "reduction",
    }[type(cert)]


def serialize(cert, system_hash: str = "-") -> str:
    lines = [f"certificate {kind_of(cert)} {system_hash}"]
    lines += _body(cert)
    return "\n".join(lines) + "\n"


def _body(cert) -> list[str]:
    if isinstance(cert, FarkasCertificate):
        return [f"target ; {format_fraction(cert.target)}", f"rows ; {_pairs(cert.coefficients)}"]
    if isinstance(cert, ChainCertificate):
        return [f"ends ; {format_fraction(cert.a1)} ; {format_fraction(cert.an)}", f"rows ; {_pairs(cert.terms)}"]
    if isinstance(cert, PsatzCertificate):
        out = [f"ideal ; {r} ; {poly_tokens(t)}" for t, r in cert.ideal]
        for J, sos in cert.cone:
            rows = ",".join(str(r) for r in J) or "-"
            for w, q in sos:
                out.append(f"cone ; {rows} ; {format_fraction(w)} ; {poly_tokens(q)}")
            out.append("endcone")
        out += [f"monoid ; {r} ; {k}" for r, k in cert.monoid]
        return out
    if isinstance(cert, SturmCertificate):
        out = [
            f"sturm ; {cert.var} ; {format_fraction(cert.interval.lo)} ; {format_fraction(cert.interval.hi)}"
            f" ; {cert.tallies[0]} ; {cert.tallies[1]}",
            f"poly ; {poly_tokens(cert.polynomial)}",
        ]
        for c in cert.cells:
            out.append(
                f"cell ; {'root' if c.root else 'point'} ; {format_fraction(c.interval.lo)} ; "
                f"{format_fraction(c.interval.hi)} ; {c.violated}"
            )
        return out
    if isinstance(cert, PruneCertificate):
        out = [f"box ; {','.join(str(v) for v in cert.vars)}"]
        stack = [cert.tree]
        while stack:
            node = stack.pop()
            if isinstance(node, PruneLeaf):
                out.append(f"leaf ; {node.row}")
            else:
                out.append(f"split ; {node.var} ; {format_fraction(node.at)}")
                stack.append(node.high)
                stack.append(node.low)
        return out
    if isinstance(cert, ReductionCertificate):
        out = [f"coords ; {cert.coords.n} ; " + " ".join(format(b, "x") for b in cert.coords.bits)]
        for st in cert.steps:
            if isinstance(st, Subst):
                out.append(f"subst ; {st.var} ; {format_fraction(st.scale)} ; {_pairs(st.combo)} ; {poly_tokens(st.expr)}")
            elif isinstance(st, Combine):
                out.append(f"combine ; {_pairs(st.combo)}")
            else:
                out.append(f"divide ; {st.row} ; {st.by} ; {poly_tokens(st.quotient)}")
        out.append(f"inner ; {kind_of(cert.inner)}")
        out += _body(cert.inner)
        return out
    raise CertificateError(f"cannot serialize {type(cert).__name__}")


def parse_certificate(text: str) -> tuple[object, str]:
    """Inverse of ``serialize``; returns (certificate, system hash)."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise CertificateError("empty certificate file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "certificate":
        raise CertificateError("first line must be 'certificate <kind> <system-hash>'")
    fields = [[f.strip() for f in ln.split(";")] for ln in lines[1:]]
    try:
        cert, rest = _parse_body(head[1], fields, universe="y")
    except (IndexError, ValueError) as e:
        raise CertificateError(f"malformed certificate: {e}") from None
    if rest:
        raise CertificateError(f"unexpected line {' ; '.join(rest[0])!r}")
    return cert, head[2]


def _parse_body(kind: str, f: list, universe: str):
    if kind == "farkas":
        target = parse_number(f[0][1])
        return FarkasCertificate(_parse_pairs(f[1][1]), target), f[2:]
    if kind == "chain":
        return ChainCertificate(_parse_pairs(f[1][1]), parse_number(f[0][1]), parse_number(f[0][2])), f[2:]
    if kind == "psatz":
        ideal, cone, monoid = [], [], []
        i = 0
        current: list = []
        current_j = None
        while i < len(f) and f[i][0] in ("ideal", "cone", "endcone", "monoid"):
            tag = f[i]
            if tag[0] == "ideal":
                ideal.append((parse_poly_tokens(tag[2], universe), int(tag[1])))
            elif tag[0] == "cone":
                current_j = () if tag[1] == "-" else tuple(int(r) for r in tag[1].split(","))
                current.append((parse_number(tag[2]), parse_poly_tokens(tag[3], universe)))
            elif tag[0] == "endcone":
                cone.append((current_j, tuple(current)))
                current, current_j = [], None
            else:
                monoid.append((int(tag[1]), int(tag[2])))
            i += 1
        if current:
            raise CertificateError("cone part missing 'endcone'")
        return PsatzCertificate(tuple(ideal), tuple(cone), tuple(monoid)), f[i:]
    if kind == "sturm":
        h = f[0]
        var = int(h[1])
        iv = RatInterval(parse_number(h[2]), parse_number(h[3]))
        poly = parse_poly_tokens(f[1][1], "z")
        cells = []
        i = 2
        while i < len(f) and f[i][0] == "cell":
            c = f[i]
            cells.append(Cell(c[1] == "root", RatInterval(parse_number(c[2]), parse_number(c[3])), int(c[4])))
            i += 1
        return SturmCertificate(var, poly, iv, (int(h[4]), int(h[5])), tuple(cells)), f[i:]
    if kind == "prune":
        vars_ = tuple(int(v) for v in f[0][1].split(",") if v)
        pos = [1]

        def node():
            tag = f[pos[0]]
            pos[0] += 1
            if tag[0] == "leaf":
                return PruneLeaf(int(tag[1]))
            if tag[0] != "split":
                raise CertificateError(f"expected split or leaf, got {tag[0]!r}")
            low = node()
            high = node()
            return PruneSplit(int(tag[1]), parse_number(tag[2]), low, high)

        tree = node()
        return PruneCertificate(vars_, tree), f[pos[0]:]
    if kind == "reduction":
        h = f[0]
        n = int(h[1])
        bits = tuple(int(b, 16) for b in h[2].split())
        if len(bits) != 1 << n:
            raise CertificateError("coordinate count does not match the atom count")
        try:
            coords = Coordinates(n, bits, tuple(_invert(list(bits), 1 << n)))
        except StopIteration:
            raise CertificateError("coordinate atom sets are not independent") from None
        steps = []
        i = 1
        while f[i][0] in ("subst", "combine", "divide"):
            s = f[i]
            if s[0] == "subst":
                steps.append(Subst(int(s[1]), parse_poly_tokens(s[4], "u"), _parse_pairs(s[3]), parse_number(s[2])))
            elif s[0] == "combine":
                steps.append(Combine(_parse_pairs(s[1])))
            else:
                steps.append(Divide(int(s[1]), int(s[2]), parse_poly_tokens(s[3], "u")))
            i += 1
        if f[i][0] != "inner":
            raise CertificateError("reduction certificate lacks an inner certificate")
        inner, rest = _parse_body(f[i][1], f[i + 1 :], universe="u")
        return ReductionCertificate(coords, tuple(steps), inner), rest
    raise CertificateError(f"unknown certificate kind {kind!r}")
