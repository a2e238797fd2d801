"""Requirement DSL: parsing, printing and desugaring into x-space constraints.

One x-variable is registered per distinct atom set, numbered in order of first
appearance while the statements are desugared.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from .events import (
    MAX_EVENTS,
    And,
    AtomSet,
    BooleanExpr,
    Const,
    Event,
    EventId,
    Not,
    Or,
    atoms_of,
    conj,
    events_in,
    format_expr,
    minterm,
)
from .numeric.polynomial import Polynomial
from .numeric.rational import NumberError, format_short, parse_number

MAX_COLLECTIVE = 16


class SpecError(ValueError):
    """Syntax or semantic error in a requirement spec, with a source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class SpecWarning(UserWarning):
    pass


class Relation(Enum):
    EQ = "= 0"
    GEQ = ">= 0"
    GT = "> 0"
    NEQ = "!= 0"

    def holds(self, value) -> bool:
        if self is Relation.EQ:
            return value == 0
        if self is Relation.GEQ:
            return value >= 0
        if self is Relation.GT:
            return value > 0
        return value != 0

    @property
    def token(self) -> str:
        return {"EQ": "=", "GEQ": ">=", "GT": ">", "NEQ": "!="}[self.name]

    @property
    def is_strict(self) -> bool:
        return self in (Relation.GT, Relation.NEQ)


RELOPS = ("<=", ">=", "!=", "=", "<", ">")


# ----------------------------------------------------------------- poly AST
@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Prob:
    expr: BooleanExpr


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "PolyExpr"
    right: "PolyExpr"


@dataclass(frozen=True)
class Neg:
    arg: "PolyExpr"


@dataclass(frozen=True)
class Pow:
    base: "PolyExpr"
    exp: int


PolyExpr = Union[Num, Prob, BinOp, Neg, Pow]


def format_prob_arg(e: BooleanExpr) -> str:
    s = format_expr(e)
    return f"({s})" if isinstance(e, Or) else s


def format_poly_expr(e: PolyExpr, prec: int = 0) -> str:
    if isinstance(e, Num):
        s = format_short(e.value)
        return f"({s})" if e.value < 0 and prec > 0 else s
    if isinstance(e, Prob):
        return f"P({format_prob_arg(e.expr)})"
    if isinstance(e, Neg):
        s = "-" + format_poly_expr(e.arg, 3)
        return f"({s})" if prec > 1 else s
    if isinstance(e, Pow):
        return f"{format_poly_expr(e.base, 4)}^{e.exp}"
    if isinstance(e, BinOp):
        if e.op == "*":
            s = f"{format_poly_expr(e.left, 2)} * {format_poly_expr(e.right, 3)}"
            return f"({s})" if prec > 2 else s
        s = f"{format_poly_expr(e.left, 1)} {e.op} {format_poly_expr(e.right, 2)}"
        return f"({s})" if prec > 1 else s
    raise TypeError(e)


# --------------------------------------------------------------- statements
@dataclass(frozen=True)
class Statement:
    """One line of the DSL, kept with its sugar before desugaring.

    ``kind`` is one of ``probability``, ``conditional``, ``independent``,
    ``pairwise``, ``cond_independent``, ``indep_algebras``, ``constraint``.
    """

    kind: str
    args: tuple
    line: int = 0

    def format(self) -> str:
        k, a = self.kind, self.args
        if k == "probability":
            expr, op, c = a
            return f"P({format_prob_arg(expr)}) {op} {format_short(c)}"
        if k == "conditional":
            target, given, op, c = a
            return f"P({format_prob_arg(target)} given {format_prob_arg(given)}) {op} {format_short(c)}"
        if k in ("independent", "pairwise"):
            word = "independent" if k == "independent" else "pairwise_independent"
            return f"{word} " + ", ".join(format_expr(e) for e in a)
        if k == "cond_independent":
            a1, a2, a3 = a
            return f"independent {format_expr(a1)}, {format_expr(a2)} given {format_expr(a3)}"
        if k == "indep_algebras":
            left, right = a
            return "indep_algebras [{}] [{}]".format(" ".join(e.name for e in left), " ".join(e.name for e in right))
        if k == "constraint":
            lhs, op, rhs = a
            return f"constraint {format_poly_expr(lhs)} {op} {format_poly_expr(rhs)}"
        raise ValueError(k)


@dataclass(frozen=True)
class ProbTerm:
    index: int
    expr: BooleanExpr
    atoms: AtomSet

    @property
    def name(self) -> str:
        return f"P({format_prob_arg(self.expr)})"


@dataclass(frozen=True)
class Constraint:
    poly: Polynomial  # over x-variables
    rel: Relation
    source_line: int = 0
    sugar: str = ""

    def holds_at(self, xvals) -> bool:
        return self.rel.holds(self.poly.evaluate(xvals))


class TermRegistry:
    """Canonical map from atom sets to x-variable indices."""

    def __init__(self, n: int):
        self.n = n
        self.terms: list[ProbTerm] = []
        self._by_atoms: dict[int, int] = {}

    def var(self, expr: BooleanExpr) -> Polynomial:
        return Polynomial.var(self.index(expr), "x")

    def index(self, expr: BooleanExpr) -> int:
        atoms = atoms_of(expr, self.n)
        idx = self._by_atoms.get(atoms.bits)
        if idx is None:
            idx = len(self.terms)
            self._by_atoms[atoms.bits] = idx
            self.terms.append(ProbTerm(idx, expr, atoms))
        return idx

    def lookup(self, expr: BooleanExpr) -> int | None:
        return self._by_atoms.get(atoms_of(expr, self.n).bits)


# -------------------------------------------------------------- desugaring
def _relate(lhs: Polynomial, op: str, rhs: Polynomial) -> tuple[Polynomial, Relation]:
    if op == "=":
        return lhs - rhs, Relation.EQ
    if op == ">=":
        return lhs - rhs, Relation.GEQ
    if op == "<=":
        return rhs - lhs, Relation.GEQ
    if op == ">":
        return lhs - rhs, Relation.GT
    if op == "<":
        return rhs - lhs, Relation.GT
    if op == "!=":
        return lhs - rhs, Relation.NEQ
    raise ValueError(f"unknown relation {op!r}")


def desugar_probability(reg: TermRegistry, e: BooleanExpr, c: Fraction, op: str = "=", line: int = 0) -> Constraint:
    poly, rel = _relate(reg.var(e), op, Polynomial.const(c, "x"))
    return Constraint(poly, rel, line, "probability")


def desugar_independence(reg: TermRegistry, exprs, collective: bool = True, line: int = 0) -> list[Constraint]:
    if len(exprs) < 2:
        raise SpecError("independence needs at least two expressions", line)
    if collective and len(exprs) > MAX_COLLECTIVE:
        raise SpecError(f"collective independence of more than {MAX_COLLECTIVE} expressions", line)
    sizes = range(2, len(exprs) + 1) if collective else (2,)
    # register the single terms first so numbering follows the statement
    singles = [reg.var(e) for e in exprs]
    out = []
    for k in sizes:
        for combo in itertools.combinations(range(len(exprs)), k):
            inter = reg.var(conj(*(exprs[i] for i in combo)))
            prod = Polynomial.const(1, "x")
            for i in combo:
                prod = prod * singles[i]
            out.append(Constraint(inter - prod, Relation.EQ, line, "independent" if collective else "pairwise"))
    return out


def desugar_conditional(reg: TermRegistry, target, given, c: Fraction, op: str = "=", line: int = 0) -> list[Constraint]:
    joint = reg.var(And(target, given))
    cond = reg.var(given)
    poly, rel = _relate(joint, op, cond.scale(c))
    return [
        Constraint(poly, rel, line, "conditional"),
        Constraint(cond, Relation.NEQ, line, "conditional"),
    ]


def desugar_conditional_independence(reg: TermRegistry, a1, a2, a3, line: int = 0) -> list[Constraint]:
    all3 = reg.var(And(And(a1, a2), a3))
    c = reg.var(a3)
    p13 = reg.var(And(a1, a3))
    p23 = reg.var(And(a2, a3))
    return [
        Constraint(all3 * c - p13 * p23, Relation.EQ, line, "cond_independent"),
        Constraint(c, Relation.NEQ, line, "cond_independent"),
    ]


def desugar_algebra_independence(reg: TermRegistry, left, right, line: int = 0) -> list[Constraint]:
    """Independence of the algebras generated by two event lists.

    Every nonempty-event atom of ``left`` (the all-complement atom is implied
    by normalization) is paired with every atom of ``right``.
    """
    if set(left) & set(right):
        warnings.warn("indep_algebras with overlapping event lists", SpecWarning, stacklevel=2)
    out = []
    for b in range(1, 1 << len(left)):
        beta = _sub_minterm(b, left)
        for a in range(1 << len(right)):
            alpha = _sub_minterm(a, right)
            joint = reg.var(And(beta, alpha))
            out.append(Constraint(joint - reg.var(beta) * reg.var(alpha), Relation.EQ, line, "indep_algebras"))
    return out


def _sub_minterm(code: int, events: list[EventId]) -> BooleanExpr:
    lits = []
    for pos, ev in enumerate(events):
        lit: BooleanExpr = Event(ev)
        if not (code >> pos) & 1:
            lit = Not(lit)
        lits.append(lit)
    return conj(*lits)


def poly_of(reg: TermRegistry, e: PolyExpr) -> Polynomial:
    if isinstance(e, Num):
        return Polynomial.const(e.value, "x")
    if isinstance(e, Prob):
        return reg.var(e.expr)
    if isinstance(e, Neg):
        return -poly_of(reg, e.arg)
    if isinstance(e, Pow):
        return poly_of(reg, e.base) ** e.exp
    if isinstance(e, BinOp):
        a, b = poly_of(reg, e.left), poly_of(reg, e.right)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    raise TypeError(e)


# -------------------------------------------------------- requirement set
@dataclass
class RequirementSet:
    events: list[EventId]
    statements: list[Statement]
    constraints: list[Constraint] = field(default_factory=list)
    registry: TermRegistry | None = None
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.registry is None:
            self._desugar()

    @property
    def n(self) -> int:
        return len(self.events)

    @property
    def prob_terms(self) -> list[ProbTerm]:
        return self.registry.terms

    def event(self, name: str) -> EventId:
        for ev in self.events:
            if ev.name == name:
                return ev
        raise SpecError(f"undeclared event {name!r}")

    def _desugar(self):
        if not 1 <= self.n <= MAX_EVENTS:
            raise SpecError(f"need between 1 and {MAX_EVENTS} events, got {self.n}")
        reg = TermRegistry(self.n)
        out: list[Constraint] = []
        for st in self.statements:
            k, a = st.kind, st.args
            if k == "probability":
                out.append(desugar_probability(reg, a[0], a[2], a[1], st.line))
            elif k == "conditional":
                out.extend(desugar_conditional(reg, a[0], a[1], a[3], a[2], st.line))
            elif k == "independent":
                out.extend(desugar_independence(reg, list(a), True, st.line))
            elif k == "pairwise":
                out.extend(desugar_independence(reg, list(a), False, st.line))
            elif k == "cond_independent":
                out.extend(desugar_conditional_independence(reg, *a, line=st.line))
            elif k == "indep_algebras":
                out.extend(desugar_algebra_independence(reg, list(a[0]), list(a[1]), st.line))
            elif k == "constraint":
                lhs, op, rhs = a
                poly, rel = _relate(poly_of(reg, lhs), op, poly_of(reg, rhs))
                if poly.is_zero() and rel is Relation.EQ:
                    continue
                out.append(Constraint(poly, rel, st.line, "constraint"))
            else:
                raise SpecError(f"unknown statement kind {k!r}", st.line)
        # x - x = 0 style identities (e.g. P(A given A) = 1) carry no information
        self.constraints = [c for c in out if not (c.poly.is_zero() and c.rel is Relation.EQ)]
        self.registry = reg

    def x_name(self, i: int) -> str:
        return self.registry.terms[i].name

    def format(self) -> str:
        lines = ["events " + " ".join(ev.name for ev in self.events)]
        lines += [st.format() for st in self.statements]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:/\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|!=|[=<>!&|()\[\],+\-*^]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecError(f"unexpected character {text[pos:].strip()[:1]!r}", line, pos + 1)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return toks


class _LineParser:
    def __init__(self, toks: list[_Tok], line: int, events: dict[str, EventId]):
        self.toks = toks
        self.i = 0
        self.line = line
        self.events = events

    def peek(self, k: int = 0) -> _Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            raise SpecError("unexpected end of line", self.line, self._end_col())
        self.i += 1
        return t

    def _end_col(self) -> int:
        if not self.toks:
            return 1
        last = self.toks[-1]
        return last.col + len(last.text)

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        col = tok.col if tok else self._end_col()
        raise SpecError(msg, self.line, col)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t is None or t.text != text:
            self.error(f"expected {text!r}")
        return self.next()

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text and t.kind != "num"

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    # bexpr := term ('|' term)* ; term := factor ('&' factor)* ; factor := '!' factor | atom
    def bexpr(self) -> BooleanExpr:
        e = self.bterm()
        while self.at("|"):
            self.next()
            e = Or(e, self.bterm())
        return e

    def bterm(self) -> BooleanExpr:
        e = self.bfactor()
        while self.at("&"):
            self.next()
            e = And(e, self.bfactor())
        return e

    def bfactor(self) -> BooleanExpr:
        if self.at("!"):
            self.next()
            return Not(self.bfactor())
        if self.at("("):
            self.next()
            e = self.bexpr()
            self.expect(")")
            return e
        t = self.peek()
        if t is None or t.kind != "name":
            self.error("expected an event name")
        self.next()
        if t.text == "Omega":
            return Const(True)
        if t.text == "Empty":
            return Const(False)
        if t.text not in self.events:
            raise SpecError(f"undeclared event {t.text!r}", self.line, t.col)
        return Event(self.events[t.text])

    def _pterm_expr(self) -> BooleanExpr:
        # a top-level '|' inside P(...) reads like a conditional bar, so unions
        # there must be parenthesized: P((A | B))
        e = self.bterm()
        if self.at("|"):
            self.error("ambiguous '|' inside P(...): write P(A given B) for a conditional or P((A | B)) for a union")
        return e

    def number(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        t = self.next()
        if t.kind != "num":
            self.error("expected a number", t)
        try:
            v = parse_number(t.text)
        except NumberError as exc:
            raise SpecError(str(exc), self.line, t.col) from None
        return -v if neg else v

    def relop(self) -> str:
        t = self.peek()
        if t is None or t.text not in RELOPS:
            self.error("expected a relation (=, <=, >=, <, >, !=)")
        return self.next().text

    # P-term: 'P' '(' bexpr [given bexpr] ')'
    def prob_call(self):
        t = self.next()
        if t.text != "P":
            self.error("expected P(...)", t)
        self.expect("(")
        target = self._pterm_expr()
        given = None
        if self.at("given"):
            self.next()
            given = self._pterm_expr()
        t = self.peek()
        if t is None or t.text != ")":
            self.error("expected ')'")
        self.next()
        return target, given

    # polyexpr := pterm (('+'|'-') pterm)* ; pterm := pfactor ('*' pfactor)* ; pfactor := ['-'] pbase ['^' int]
    def pexpr(self) -> PolyExpr:
        e = self.pterm()
        while self.at("+") or self.at("-"):
            op = self.next().text
            e = BinOp(op, e, self.pterm())
        return e

    def pterm(self) -> PolyExpr:
        e = self.pfactor()
        while self.at("*"):
            self.next()
            e = BinOp("*", e, self.pfactor())
        return e

    def pfactor(self) -> PolyExpr:
        if self.at("-"):
            self.next()
            return Neg(self.pfactor())
        base = self.pbase()
        if self.at("^"):
            self.next()
            t = self.next()
            if t.kind != "num" or not t.text.isdigit():
                self.error("exponent must be a nonnegative integer", t)
            return Pow(base, int(t.text))
        return base

    def pbase(self) -> PolyExpr:
        t = self.peek()
        if t is None:
            self.error("expected a term")
        if t.kind == "num":
            return Num(self.number())
        if t.text == "(":
            self.next()
            e = self.pexpr()
            self.expect(")")
            return e
        if t.text == "P":
            target, given = self.prob_call()
            if given is not None:
                self.error("conditional probabilities are not allowed inside constraint expressions", t)
            return Prob(target)
        self.error("expected a number, P(...) or '('")


def apply_params(text: str, overrides: dict[str, str] | None = None) -> str:
    """Textual substitution of ``$name`` placeholders.

    Defaults come from ``param name = value`` lines; ``overrides`` win.
    """
    values: dict[str, str] = {}
    for raw in text.splitlines():
        m = re.match(r"\s*param\s+([A-Za-z_]\w*)\s*=\s*(\S+)\s*(#.*)?$", raw)
        if m:
            values[m.group(1)] = m.group(2)
    used = set(re.findall(r"\$([A-Za-z_]\w*)", text))
    unknown = sorted(set(overrides or {}) - used - set(values))
    if unknown:
        raise SpecError(f"spec has no parameter ${unknown[0]}")
    values.update(overrides or {})

    def repl(m):
        name = m.group(1)
        if name not in values:
            raise SpecError(f"no value for parameter ${name}")
        return values[name]

    return re.sub(r"\$([A-Za-z_]\w*)", repl, text)


def parse_spec(text: str, params: dict[str, str] | None = None) -> RequirementSet:
    text = apply_params(text, params)
    events: dict[str, EventId] = {}
    statements: list[Statement] = []
    warns: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        toks = _tokenize(body, lineno)
        p = _LineParser(toks, lineno, events)
        head = toks[0]
        if head.text == "param":
            continue
        if head.text == "events":
            p.next()
            if events:
                p.error("events already declared", head)
            if p.at_end():
                p.error("expected event names")
            while not p.at_end():
                t = p.next()
                if t.kind != "name" or t.text in ("P", "given", "Omega", "Empty"):
                    p.error("expected an event name", t)
                if t.text in events:
                    raise SpecError(f"duplicate event name {t.text!r}", lineno, t.col)
                events[t.text] = EventId(len(events), t.text)
            if len(events) > MAX_EVENTS:
                raise SpecError(f"at most {MAX_EVENTS} events supported", lineno, head.col)
            continue
        if not events:
            p.error("statements must follow an 'events' line", head)
        st = _statement(p, head, lineno, warns)
        if not p.at_end():
            p.error("unexpected trailing input")
        statements.append(st)
    if not events:
        raise SpecError("no 'events' line")
    evlist = sorted(events.values(), key=lambda e: e.index)
    for w in warns:
        warnings.warn(w, SpecWarning, stacklevel=2)
    return RequirementSet(evlist, statements, warnings=warns)


def parse_objective(rs: RequirementSet, text: str) -> Polynomial:
    """A polynomial expression in ``P(...)`` terms, returned over the atom variables."""
    toks = _tokenize(text, 1)
    if not toks:
        raise SpecError("empty objective")
    p = _LineParser(toks, 1, {ev.name: ev for ev in rs.events})
    e = p.pexpr()
    if not p.at_end():
        p.error("unexpected trailing input")
    reg = TermRegistry(rs.n)
    x = poly_of(reg, e)
    sub = {t.index: Polynomial.linear({a: 1 for a in t.atoms}, universe="y") for t in reg.terms}
    return x.substitute(sub, universe="y")


def _statement(p: _LineParser, head: _Tok, lineno: int, warns: list[str]) -> Statement:
    if head.text == "P":
        target, given = p.prob_call()
        op = p.relop()
        c = p.number()
        if given is None:
            if not 0 <= c <= 1 and op == "=":
                warns.append(f"line {lineno}: probability {format_short(c)} outside [0, 1]")
            return Statement("probability", (target, op, c), lineno)
        if not 0 <= c <= 1 and op == "=":
            warns.append(f"line {lineno}: conditional probability {format_short(c)} outside [0, 1]")
        return Statement("conditional", (target, given, op, c), lineno)
    if head.text in ("independent", "pairwise_independent"):
        p.next()
        exprs = [p.bexpr()]
        while not p.at_end() and not p.at("given"):
            if p.at(","):
                p.next()
            exprs.append(p.bexpr())
        if p.at("given"):
            p.next()
            cond = p.bexpr()
            if len(exprs) != 2 or head.text != "independent":
                p.error("conditional independence takes exactly two expressions")
            return Statement("cond_independent", (exprs[0], exprs[1], cond), lineno)
        if len(exprs) < 2:
            p.error("independence needs at least two expressions")
        kind = "independent" if head.text == "independent" else "pairwise"
        return Statement(kind, tuple(exprs), lineno)
    if head.text == "indep_algebras":
        p.next()
        left = _event_list(p)
        right = _event_list(p)
        if set(left) & set(right):
            warns.append(f"line {lineno}: indep_algebras lists share events")
        return Statement("indep_algebras", (tuple(left), tuple(right)), lineno)
    if head.text == "constraint":
        p.next()
        lhs = p.pexpr()
        op = p.relop()
        rhs = p.pexpr()
        return Statement("constraint", (lhs, op, rhs), lineno)
    p.error(f"unknown statement {head.text!r}", head)


def _event_list(p: _LineParser) -> list[EventId]:
    p.expect("[")
    out = []
    while not p.at("]"):
        t = p.next()
        if t.kind != "name" or t.text not in p.events:
            raise SpecError(f"undeclared event {t.text!r}", p.line, t.col)
        out.append(p.events[t.text])
    p.next()
    if not out:
        p.error("empty event list")
    return out


__all__ = [
    "Constraint",
    "ProbTerm",
    "Relation",
    "RequirementSet",
    "SpecError",
    "SpecWarning",
    "Statement",
    "TermRegistry",
    "apply_params",
    "desugar_algebra_independence",
    "desugar_conditional",
    "desugar_conditional_independence",
    "desugar_independence",
    "desugar_probability",
    "minterm",
    "events_in",
    "parse_objective",
    "parse_spec",
]
