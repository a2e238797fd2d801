"""Named events, boolean combinations and their atom (minterm) sets.

Atoms are the ``2**n`` elementary outcomes of ``n`` events. Atom ``a`` is an
integer whose bit ``i`` is set iff the event with index ``i`` occurs. A set of
atoms is stored as a Python integer used as a bitset over ``range(2**n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

MAX_EVENTS = 24


class EventError(ValueError):
    """Raised for undeclared events or invalid atom indices."""


@dataclass(frozen=True)
class EventId:
    index: int
    name: str


@dataclass(frozen=True)
class Event:
    event: EventId


@dataclass(frozen=True)
class Not:
    arg: "BooleanExpr"


@dataclass(frozen=True)
class And:
    left: "BooleanExpr"
    right: "BooleanExpr"


@dataclass(frozen=True)
class Or:
    left: "BooleanExpr"
    right: "BooleanExpr"


@dataclass(frozen=True)
class Const:
    """The sure event (``value=True``) or the impossible event."""

    value: bool


BooleanExpr = Union[Event, Not, And, Or, Const]


def conj(*exprs: BooleanExpr) -> BooleanExpr:
    if not exprs:
        return Const(True)
    out = exprs[0]
    for e in exprs[1:]:
        out = And(out, e)
    return out


def disj(*exprs: BooleanExpr) -> BooleanExpr:
    if not exprs:
        return Const(False)
    out = exprs[0]
    for e in exprs[1:]:
        out = Or(out, e)
    return out


def events_in(e: BooleanExpr) -> frozenset[EventId]:
    if isinstance(e, Event):
        return frozenset([e.event])
    if isinstance(e, Not):
        return events_in(e.arg)
    if isinstance(e, (And, Or)):
        return events_in(e.left) | events_in(e.right)
    return frozenset()


def eval_expr(e: BooleanExpr, atom: int, n: int | None = None) -> bool:
    """Truth value of ``e`` on the minterm ``atom``."""
    if n is not None and not 0 <= atom < (1 << n):
        raise EventError(f"atom {atom} out of range for {n} events")
    if isinstance(e, Event):
        if n is not None and e.event.index >= n:
            raise EventError(f"undeclared event {e.event.name!r}")
        return bool((atom >> e.event.index) & 1)
    if isinstance(e, Not):
        return not eval_expr(e.arg, atom, n)
    if isinstance(e, And):
        return eval_expr(e.left, atom, n) and eval_expr(e.right, atom, n)
    if isinstance(e, Or):
        return eval_expr(e.left, atom, n) or eval_expr(e.right, atom, n)
    if isinstance(e, Const):
        return e.value
    raise TypeError(f"not a boolean expression: {e!r}")


@lru_cache(maxsize=None)
def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def _event_bits(i: int, n: int) -> int:
    # ones on atoms with bit i set, period 2**(i+1), replicated across 2**n atoms
    half = 1 << i
    block = ((1 << half) - 1) << half
    rep = _full(n) // ((1 << (2 * half)) - 1)
    return block * rep


@dataclass(frozen=True)
class AtomSet:
    """Subset of the ``2**n`` atoms, stored as an integer bitset."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits < 0 or self.bits > _full(self.n):
            raise EventError("atom set out of range")

    def __contains__(self, atom: int) -> bool:
        return bool((self.bits >> atom) & 1)

    def __iter__(self) -> Iterator[int]:
        b, a = self.bits, 0
        while b:
            if b & 1:
                yield a
            b >>= 1
            a += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __and__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.bits & other.bits, self.n)

    def __or__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.bits | other.bits, self.n)

    def __invert__(self) -> "AtomSet":
        return complement_atoms(self, self.n)

    @classmethod
    def of(cls, atoms, n: int) -> "AtomSet":
        bits = 0
        for a in atoms:
            if not 0 <= a < (1 << n):
                raise EventError(f"atom {a} out of range for {n} events")
            bits |= 1 << a
        return cls(bits, n)

    def atoms(self) -> list[int]:
        return list(self)


def atoms_of(e: BooleanExpr, n: int) -> AtomSet:
    """The set of atoms on which ``e`` is true (its disjunctive normal form)."""
    if n < 1:
        raise EventError("need at least one event")
    if n > MAX_EVENTS:
        raise EventError(f"at most {MAX_EVENTS} events supported")
    return AtomSet(_bits(e, n), n)


def _bits(e: BooleanExpr, n: int) -> int:
    if isinstance(e, Event):
        if e.event.index >= n:
            raise EventError(f"undeclared event {e.event.name!r}")
        return _event_bits(e.event.index, n)
    if isinstance(e, Not):
        return _full(n) ^ _bits(e.arg, n)
    if isinstance(e, And):
        return _bits(e.left, n) & _bits(e.right, n)
    if isinstance(e, Or):
        return _bits(e.left, n) | _bits(e.right, n)
    if isinstance(e, Const):
        return _full(n) if e.value else 0
    raise TypeError(f"not a boolean expression: {e!r}")


def complement_atoms(s: AtomSet, n: int) -> AtomSet:
    return AtomSet(_full(n) ^ s.bits, n)


def minterm(atom: int, events: list[EventId]) -> BooleanExpr:
    """The conjunction describing a single atom over ``events``."""
    lits = []
    for ev in events:
        lit: BooleanExpr = Event(ev)
        if not (atom >> ev.index) & 1:
            lit = Not(lit)
        lits.append(lit)
    return conj(*lits)


def format_expr(e: BooleanExpr, _prec: int = 0) -> str:
    """Render with minimal parentheses; precedence ``!`` > ``&`` > ``|``."""
    if isinstance(e, Event):
        return e.event.name
    if isinstance(e, Const):
        return "Omega" if e.value else "Empty"
    if isinstance(e, Not):
        return "!" + format_expr(e.arg, 3)
    if isinstance(e, And):
        s = f"{format_expr(e.left, 2)} & {format_expr(e.right, 3)}"
        return f"({s})" if _prec > 2 else s
    if isinstance(e, Or):
        s = f"{format_expr(e.left, 1)} | {format_expr(e.right, 2)}"
        return f"({s})" if _prec > 1 else s
    raise TypeError(f"not a boolean expression: {e!r}")


def atom_label(atom: int, events: list[EventId]) -> str:
    return " & ".join(ev.name if (atom >> ev.index) & 1 else "!" + ev.name for ev in events)
