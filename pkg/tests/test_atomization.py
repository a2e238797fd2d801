from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from probenv.atomization import (
    IntervalWitness,
    Witness,
    atomize,
    format_witness,
    verify_witness,
    x_of_witness,
)
from probenv.events import Event
from probenv.numeric.interval import RatInterval
from probenv.numeric.polynomial import Polynomial
from probenv.requirements import Relation, parse_spec

from conftest import grid, load, random_spec, system


def holds(v, rel):
    return {Relation.EQ: v == 0, Relation.GEQ: v >= 0, Relation.GT: v > 0, Relation.NEQ: v != 0}[rel]


@settings(max_examples=1000, deadline=None)
@given(random_spec(max_n=3))
def test_atom_rows_agree_with_term_rows(text):
    rs = parse_spec(text)
    s = atomize(rs)
    n = rs.n
    # a coarse grid for n = 3 keeps the case count high
    for y in list(grid(n, 2 if n == 3 else 3))[:20]:
        w = Witness(y)
        x = w.x_values(rs)
        for i, c in enumerate(rs.constraints):
            assert c.poly.evaluate(x) == s.poly(i).evaluate(dict(enumerate(y)))


def test_row_layout():
    s = system("appendix_a.penv")
    kinds = [r.kind for r in s.rows]
    assert kinds == ["requirement"] * 9 + ["normalization"] + ["nonnegativity"] * 8
    assert s.normalization_row == 9
    assert s.poly(9).format(lambda a: f"y{a}") == "y0 + y1 + y2 + y3 + y4 + y5 + y6 + y7 - 1"


def test_witness_checks():
    rs = load("appendix_c_free.penv")
    # P(E1)=4/5, P(E2)=7/10, P(E3)=3/5 with the independence pattern
    y = []
    for a in range(8):
        p1 = F(4, 5) if a & 1 else F(1, 5)
        p2 = F(7, 10) if a & 2 else F(3, 10)
        p3 = F(3, 5) if a & 4 else F(2, 5)
        y.append(p1 * p2 * p3)
    ok, bad = verify_witness(Witness(y), rs)
    assert ok and not bad
    assert x_of_witness(Witness(y), Event(rs.events[2])) == F(3, 5)
    y2 = list(y)
    y2[0], y2[1] = y2[0] + F(1, 100), y2[1] - F(1, 100)
    ok, bad = verify_witness(Witness(y2), rs)
    assert not ok and bad


@pytest.mark.parametrize("y", [(F(1, 2), F(1, 3)), (F(3, 2), F(-1, 2))])
def test_witness_rejects_non_distributions(y):
    with pytest.raises(ValueError):
        Witness(y)


def test_interval_witness():
    rs = parse_spec("events A\nconstraint P(A)^2 = 1/2\n")
    z = Polynomial.var(0, "z")
    w = IntervalWitness((1 - z, z), z * z - F(1, 2), RatInterval(F(7, 10), F(3, 4)))
    assert verify_witness(w, rs)[0]
    bad = IntervalWitness((1 - z, z), z * z - F(1, 2), RatInterval(F(7, 10), F(8, 10)))
    assert bad.approx()[1] == F(3, 4)
    assert "unique root" in format_witness(w, rs)
    neg = IntervalWitness((z, 1 - z), z * z - F(1, 2), RatInterval(F(7, 10), F(3, 4)))
    assert not verify_witness(neg, rs)[0]


def test_large_systems_print_in_term_form():
    s = system("five_events.penv", a="1/2")
    text = s.format()
    assert "# x0 = " in text
    assert len(text.splitlines()) < 200
    assert s.digest() == system("five_events.penv", a="0.5").digest()
    assert s.digest() != system("five_events.penv", a="11/20").digest()
