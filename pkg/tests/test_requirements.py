import pytest

from probenv.requirements import Relation, SpecError, SpecWarning, apply_params, parse_objective, parse_spec

from conftest import load, spec_text


def rows(rs):
    return [(c.poly.format(lambda j: rs.x_name(j)), c.rel) for c in rs.constraints]


def test_probability_row():
    rs = parse_spec("events A B\nP(A & !B) = 0.25\n")
    assert rows(rs) == [("P(A & !B) - 1/4", Relation.EQ)]


def test_conditional_desugars_to_product_form_and_nonzero_guard():
    rs = parse_spec("events A B\nP(A given B) = 1/3\n")
    assert rows(rs) == [("P(A & B) - 1/3*P(B)", Relation.EQ), ("P(B)", Relation.NEQ)]


@pytest.mark.parametrize("n,expected", [(2, 1), (3, 4), (5, 26)])
def test_collective_independence_row_count(n, expected):
    names = " ".join(f"A{i}" for i in range(n))
    rs = parse_spec(f"events {names}\nindependent {', '.join(names.split())}\n")
    assert len(rs.constraints) == expected


def test_pairwise_independence_row_count():
    rs = parse_spec("events A B C\npairwise_independent A B C\n")
    assert len(rs.constraints) == 3


def test_conditional_independence():
    rs = parse_spec("events A B C\nindependent A B given C\n")
    assert [r for _, r in rows(rs)] == [Relation.EQ, Relation.NEQ]


def test_algebra_independence_uses_atoms_of_each_side():
    rs = parse_spec("events E1 E2 E3\nindep_algebras [E3] [E1 E2]\n")
    assert len(rs.constraints) == 4
    assert all(c.rel is Relation.EQ and c.poly.degree() == 2 for c in rs.constraints)


def test_three_event_spec_has_nine_rows():
    rs = load("appendix_a.penv")
    assert len(rs.constraints) == 9
    assert rs.n == 3


def test_constraint_statement_and_relations():
    rs = parse_spec("events A B\nconstraint P(A)^2 + 2*P(B) <= 1\nconstraint P(A) > P(B)\n")
    (p1, r1), (p2, r2) = rows(rs)
    assert r1 is Relation.GEQ and p1 == "-P(A)^2 - 2*P(B) + 1"
    assert r2 is Relation.GT and p2 == "P(A) - P(B)"


def test_trivial_identities_are_dropped():
    rs = parse_spec("events A\nP(A given A) = 1\n")
    assert [r for _, r in rows(rs)] == [Relation.NEQ]


def test_parameters():
    text = spec_text("five_events.penv")
    assert "$a" in text
    assert "+ 3/5 -" in apply_params(text, {"a": "3/5"})
    rs = parse_spec(text, {"a": "0.5"})
    assert any("1/2" in p for p, _ in rows(rs))
    with pytest.raises(SpecError):
        apply_params("constraint P(A) = $b")


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("events A\nP(B) = 1/2\n", 2, 3),
        ("events A\nP(A) = \n", 2, 7),
        ("P(A) = 1\n", 1, 1),
        ("events A A\n", 1, 10),
        ("events A\nfrobnicate A\n", 2, 1),
        ("events A\nP(A) = 1/0\n", 2, 8),
    ],
)
def test_errors_carry_positions(text, line, col):
    with pytest.raises(SpecError) as e:
        parse_spec(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_out_of_range_probability_warns():
    with pytest.warns(SpecWarning):
        rs = parse_spec("events A\nP(A) = 1.5\n")
    assert rs.warnings


def test_format_round_trip():
    for name in ["appendix_a.penv", "appendix_c_free.penv", "two_event_conditional.penv"]:
        rs = load(name)
        again = parse_spec(rs.format())
        assert rows(again) == rows(rs)


def test_objective_over_atoms():
    rs = load("appendix_c_free.penv")
    assert parse_objective(rs, "P(E3)").format(lambda a: f"y{a}") == "y4 + y5 + y6 + y7"
    assert parse_objective(rs, "P(E1 & E2 & E3) - 1/2").format(lambda a: f"y{a}") == "y7 - 1/2"
    with pytest.raises(SpecError):
        parse_objective(rs, "P(E9)")
