import itertools
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from probenv.lp import LinRow, LPStatus, farkas_multipliers, simplex, solve_lp
from probenv.requirements import Relation

small = st.integers(-3, 3).map(F)


def test_simplex_textbook():
    # min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
    status, x, val = simplex([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [-1, -1, 0, 0])
    assert status is LPStatus.OPTIMAL
    assert val == F(-14, 5) and x[:2] == [F(8, 5), F(6, 5)]


def test_simplex_infeasible_and_unbounded():
    assert simplex([[1, 1]], [-1], [0, 0])[0] is LPStatus.INFEASIBLE
    assert simplex([[1, -1]], [0], [-1, 0])[0] is LPStatus.UNBOUNDED


def test_solve_lp_free_variables():
    rows = [LinRow({0: F(1), 1: F(1)}, F(-1), Relation.EQ), LinRow({0: F(1)}, F(2), Relation.GEQ)]
    res = solve_lp(rows, {1: F(1)}, maximize=True)
    assert res.status is LPStatus.OPTIMAL and res.value == 3 and res.point == {0: -2, 1: 3}


def vertices_value(A, b, c):
    """Brute-force oracle for min c.x over {A x <= b, 0 <= x} in two variables."""
    cons = [(row, bi) for row, bi in zip(A, b)] + [([F(-1), F(0)], F(0)), ([F(0), F(-1)], F(0))]
    best = None
    for (r1, b1), (r2, b2) in itertools.combinations(cons, 2):
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0:
            continue
        x = (b1 * r2[1] - r1[1] * b2) / det
        y = (r1[0] * b2 - b1 * r2[0]) / det
        if all(r[0] * x + r[1] * y <= bi for r, bi in cons):
            v = c[0] * x + c[1] * y
            best = v if best is None else min(best, v)
    return best


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(small, small, st.integers(0, 4).map(F)), min_size=1, max_size=4), small, small)
def test_bounded_lps_match_vertex_enumeration(cons, c0, c1):
    cons = cons + [(F(1), F(1), F(5))]  # keeps the region bounded
    A = [[a, b] for a, b, _ in cons]
    b = [r for _, _, r in cons]
    rows = [LinRow({0: -a, 1: -bb}, r, Relation.GEQ) for (a, bb), r in zip(A, b)]
    res = solve_lp(rows, {0: c0, 1: c1}, nonneg=[0, 1])
    assert res.status is LPStatus.OPTIMAL  # origin is always feasible
    assert res.value == vertices_value(A, b, [c0, c1])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(small, small, small, st.sampled_from([Relation.EQ, Relation.GEQ, Relation.GT])), min_size=1, max_size=5))
def test_farkas_alternative(raw):
    rows = [LinRow({0: a, 1: b}, c, rel) for a, b, c, rel in raw]
    mult = farkas_multipliers(rows, strict=True)
    slack = LinRow({}, F(0), Relation.GEQ)
    feasible = solve_lp(rows + [slack], {}).status is LPStatus.OPTIMAL
    if mult is None:
        return
    # combination has zero variable part and a constant that refutes the system
    for v in (0, 1):
        assert sum(m * rows[i].coeffs.get(v, 0) for i, m in mult.items()) == 0
    const = sum(m * rows[i].const for i, m in mult.items())
    for i, m in mult.items():
        if rows[i].rel is not Relation.EQ:
            assert m >= 0
    strict_used = any(rows[i].rel is Relation.GT and m > 0 for i, m in mult.items())
    assert const < 0 or (const == 0 and strict_used)
    if const < 0:
        assert not feasible
