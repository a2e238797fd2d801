import itertools

import pytest
from hypothesis import given, settings, strategies as st

from probenv.events import (
    AtomSet,
    And,
    Const,
    Event,
    EventError,
    EventId,
    Not,
    Or,
    atom_label,
    atoms_of,
    complement_atoms,
    eval_expr,
    events_in,
    format_expr,
    minterm,
)


def ev(i):
    return Event(EventId(i, f"E{i + 1}"))


def exprs(n):
    leaves = st.one_of(st.integers(0, n - 1).map(ev), st.booleans().map(Const))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
        ),
        max_leaves=12,
    )


@st.composite
def sized_expr(draw):
    n = draw(st.integers(1, 5))
    return n, draw(exprs(n))


@settings(max_examples=1000, deadline=None)
@given(sized_expr())
def test_atom_set_matches_pointwise_evaluation(case):
    n, e = case
    s = atoms_of(e, n)
    assert [a in s for a in range(1 << n)] == [eval_expr(e, a, n) for a in range(1 << n)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_truth_table_is_reached_exhaustively(n):
    # every subset of atoms is the atom set of its own disjunction of minterms
    events = [EventId(i, f"E{i + 1}") for i in range(n)]
    for bits in range(1 << (1 << n)):
        atoms = [a for a in range(1 << n) if bits >> a & 1]
        e = Const(False)
        for a in atoms:
            e = Or(e, minterm(a, events))
        assert atoms_of(e, n).bits == bits


def test_event_masks_for_five_events():
    for i in range(5):
        assert atoms_of(ev(i), 5).atoms() == [a for a in range(32) if a >> i & 1]


@settings(max_examples=200, deadline=None)
@given(sized_expr())
def test_complement_and_de_morgan(case):
    n, e = case
    assert atoms_of(Not(e), n) == complement_atoms(atoms_of(e, n), n)
    f = Not(e)
    assert atoms_of(Not(And(e, f)), n) == atoms_of(Or(Not(e), Not(f)), n)


def test_minterms_partition_the_sure_event():
    events = [EventId(i, f"A{i + 1}") for i in range(3)]
    seen = 0
    for a in range(8):
        s = atoms_of(minterm(a, events), 3)
        assert s.atoms() == [a]
        seen |= s.bits
    assert seen == 0xFF


def test_labels_and_format():
    events = [EventId(0, "E1"), EventId(1, "E2")]
    assert atom_label(1, events) == "E1 & !E2"
    assert format_expr(And(ev(0), Or(ev(1), Not(ev(2))))) == "E1 & (E2 | !E3)"
    assert events_in(And(ev(0), Not(ev(2)))) == {EventId(0, "E1"), EventId(2, "E3")}


def test_errors():
    with pytest.raises(EventError):
        eval_expr(ev(3), 0, 2)
    with pytest.raises(EventError):
        AtomSet.of([4], 2)
    with pytest.raises(EventError):
        eval_expr(ev(0), 9, 3)


def test_atomset_ops():
    a, b = AtomSet.of([0, 1], 2), AtomSet.of([1, 3], 2)
    assert (a & b).atoms() == [1]
    assert (a | b).atoms() == [0, 1, 3]
    assert (~a).atoms() == [2, 3]
    assert len(a) == 2 and list(itertools.islice(a, 5)) == [0, 1]
