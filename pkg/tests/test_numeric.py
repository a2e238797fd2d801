from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from probenv.numeric.interval import RatInterval, interval_eval
from probenv.numeric.polynomial import Polynomial, TermLimitError, UniverseError, divide_exact
from probenv.numeric.rational import NumberError, format_fraction, parse_number, simplest_between
from probenv.numeric.sturm import (
    count_roots,
    count_roots_closed,
    isolate_roots,
    refine_root,
    sign_at_root,
    sturm_chain,
    uv_eval,
    uv_mul,
)

rats = st.fractions(min_value=-3, max_value=3, max_denominator=12)
unit = st.fractions(min_value=0, max_value=1, max_denominator=16)


# ------------------------------------------------------------------ rationals
@pytest.mark.parametrize(
    "text,value",
    [("0.95", F(19, 20)), ("7/10", F(7, 10)), ("3", F(3)), (".5", F(1, 2)), ("-0.125", F(-1, 8)), ("4/8", F(1, 2))],
)
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["1/0", "abc", "1e3", "", "1/2/3"])
def test_parse_number_rejects(bad):
    with pytest.raises(NumberError):
        parse_number(bad)


@settings(max_examples=300, deadline=None)
@given(rats, rats)
def test_simplest_between_is_inside_and_minimal(a, b):
    lo, hi = min(a, b), max(a, b)
    q = simplest_between(lo, hi)
    assert lo <= q <= hi
    for d in range(1, q.denominator):
        # no fraction with a smaller denominator fits
        k = -(-lo.numerator * d // lo.denominator)
        assert F(k, d) > hi


def test_format_fraction():
    assert format_fraction(F(3)) == "3/1"


# ------------------------------------------------------------------ polynomials
def polys(nvars=3, max_terms=5):
    mono = st.lists(st.tuples(st.integers(0, nvars - 1), st.integers(1, 3)), max_size=3).map(
        lambda vs: tuple(sorted({v: e for v, e in vs}.items()))
    )
    return st.dictionaries(mono, rats, max_size=max_terms).map(lambda d: Polynomial(d, "x"))


points = st.fixed_dictionaries({i: rats for i in range(3)})


@settings(max_examples=300, deadline=None)
@given(polys(), polys(), polys(), points)
def test_ring_operations_commute_with_evaluation(p, q, r, pt):
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p * (q + r)) == p * q + p * r
    assert (p - p).is_zero()


@settings(max_examples=200, deadline=None)
@given(polys(), polys())
def test_exact_division_inverts_multiplication(p, q):
    assume(not q.is_zero())
    assert divide_exact(p * q, q) == p


@settings(max_examples=200, deadline=None)
@given(polys(), polys(nvars=2), points)
def test_substitution_is_composition(p, q, pt):
    sub = p.substitute({0: q})
    inner = dict(pt)
    inner[0] = q.evaluate(pt)
    assert sub.evaluate(pt) == p.evaluate(inner)


def test_universes_do_not_mix():
    with pytest.raises(UniverseError):
        Polynomial.var(0, "x") + Polynomial.var(0, "y")


def test_format_is_graded_lex():
    p = Polynomial.var(0, "x") ** 2 - Polynomial.var(1, "x") * F(1, 2) + 3
    assert p.format(lambda i: f"x{i}") == "x0^2 - 1/2*x1 + 3"


def test_term_limit(monkeypatch):
    import probenv.numeric.polynomial as poly

    monkeypatch.setattr(poly, "TERM_LIMIT", 1000)
    s = Polynomial.linear({i: 1 for i in range(20)}, universe="y")
    assert len((s * s).terms) == 210
    with pytest.raises(TermLimitError):
        s * s * s


# ------------------------------------------------------------------ intervals
@settings(max_examples=300, deadline=None)
@given(polys(), st.fixed_dictionaries({i: st.tuples(unit, unit) for i in range(3)}), st.lists(unit, min_size=3, max_size=3))
def test_interval_evaluation_encloses_values(p, raw, ts):
    box = {i: RatInterval(min(a, b), max(a, b)) for i, (a, b) in raw.items()}
    pt = {i: box[i].lo + ts[i] * box[i].width for i in box}
    assert p.evaluate(pt) in interval_eval(p, box)


# ------------------------------------------------------------------ Sturm
@st.composite
def constructed(draw):
    """Polynomial with known real roots (some repeated) times a positive factor."""
    roots = draw(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=9), min_size=0, max_size=5))
    pairs, degree = [], 0
    for r in dict.fromkeys(roots):
        m = min(draw(st.integers(1, 2)), 8 - degree)
        if m <= 0:
            break
        pairs.append((r, m))
        degree += m
    coeffs = [F(draw(st.integers(1, 5)))]
    for r, m in pairs:
        for _ in range(m):
            coeffs = uv_mul(coeffs, [-r, F(1)])
    if degree <= 6 and draw(st.booleans()):
        c = draw(st.fractions(min_value=F(1, 7), max_value=3, max_denominator=7))
        coeffs = uv_mul(coeffs, [c, F(0), F(1)])  # no real roots
    used = {r for r, _ in pairs}
    lo = draw(st.fractions(min_value=-3, max_value=3, max_denominator=6))
    hi = draw(st.fractions(min_value=-3, max_value=3, max_denominator=6))
    if draw(st.booleans()) and used:
        lo = min(used)  # exercise roots on the boundary
    lo, hi = min(lo, hi), max(lo, hi)
    return coeffs, sorted(used), RatInterval(lo, hi)


@settings(max_examples=1000, deadline=None)
@given(constructed())
def test_count_roots_matches_construction(case):
    coeffs, roots, iv = case
    if not roots and len(coeffs) == 1:
        assert count_roots(coeffs, iv) == 0
        return
    assert count_roots(coeffs, iv) == sum(1 for r in roots if iv.lo < r <= iv.hi)
    assert count_roots_closed(coeffs, iv) == sum(1 for r in roots if iv.lo <= r <= iv.hi)


@settings(max_examples=300, deadline=None)
@given(constructed())
def test_isolation_and_refinement(case):
    coeffs, roots, iv = case
    if len(coeffs) == 1:
        return
    ivs = isolate_roots(coeffs, iv)
    inside = [r for r in roots if iv.lo <= r <= iv.hi]
    assert len(ivs) == len(inside)
    for r, box in zip(inside, ivs):
        assert r in box
        tight = refine_root(coeffs, box, box.width / 8 or F(1))
        assert r in tight


def test_sign_at_an_irrational_root():
    p = [F(-2), F(0), F(1)]  # z^2 - 2
    (iv,) = isolate_roots(p, RatInterval(F(0), F(2)))
    assert sign_at_root([F(-1414, 1000), F(1)], p, iv) == 1
    assert sign_at_root([F(-1415, 1000), F(1)], p, iv) == -1
    assert sign_at_root(p, p, iv) == 0
    assert sign_at_root(uv_mul(p, [F(1), F(1)]), p, iv) == 0


@pytest.mark.parametrize("a", [F(1, 10), F(1, 2), F(11, 20)])
def test_quintic_chain_values(a):
    chain = sturm_chain([a, F(-1), 0, 0, 0, F(1)])  # z^5 - z + a
    assert [uv_eval(c, 0) for c in chain] == [a, -1, -a, 1 - F(3125) * a**4 / 256]
    assert [uv_eval(c, 1) for c in chain] == [a, 4, F(4, 5) - a, 1 - F(3125) * a**4 / 256]
