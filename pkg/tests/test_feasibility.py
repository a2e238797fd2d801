from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings

from probenv.atomization import IntervalWitness, Witness, atomize, verify_witness
from probenv.certificates import (
    FarkasCertificate,
    PruneCertificate,
    ReductionCertificate,
    SturmCertificate,
    chain_to_farkas,
    verify_certificate,
)
from probenv.feasibility import (
    SolverConfig,
    SoundnessError,
    StrategyClass,
    Verdict,
    branch_and_prune,
    classify,
    feasibility_interval,
    self_check,
    solve,
)
from probenv.numeric.interval import RatInterval
from probenv.numeric.polynomial import Polynomial
from probenv.reduction import apply_step, build_coordinates, check_coordinates, eliminate, u_rows
from probenv.requirements import Relation, parse_objective, parse_spec
from probenv.univariate import analyze

from conftest import grid, load, random_spec

FAST = SolverConfig(max_nodes=300, max_depth=20)


def satisfied_somewhere(rs, denoms):
    s = atomize(rs)
    polys = [s.poly(i) for i in range(len(rs.constraints))]
    rels = [c.rel for c in rs.constraints]
    for d in denoms:
        for y in grid(rs.n, d):
            pt = dict(enumerate(y))
            if all(rel.holds(p.evaluate(pt)) for p, rel in zip(polys, rels)):
                return y
    return None


@settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))
@given(random_spec(max_n=3))
def test_verdicts_agree_with_a_grid_of_distributions(text):
    rs = parse_spec(text)
    v = solve(rs, FAST)
    s = atomize(rs)
    if v.kind == "admissible":
        assert verify_witness(v.witness, rs)[0]
    elif v.kind == "inadmissible":
        assert verify_certificate(v.certificate, s)[0]
        denoms = (2, 3, 4, 6) if rs.n <= 2 else (2, 3)
        assert satisfied_somewhere(rs, denoms) is None


# ------------------------------------------------------------------ worked examples
def test_three_event_spec_is_refuted_by_a_linear_combination():
    rs = load("appendix_a.penv")
    v = solve(rs)
    assert v.kind == "inadmissible"
    assert isinstance(v.certificate, FarkasCertificate) and v.certificate.target == -1
    s = atomize(rs)
    total = Polynomial.const(0, "y")
    for r, c in v.certificate.coefficients:
        total = total + s.poly(r).scale(c)
    assert total == Polynomial.const(-1, "y")


def test_weather_spec_has_an_exact_witness():
    rs = load("appendix_c_free.penv")
    v = solve(rs)
    assert v.kind == "admissible" and isinstance(v.witness, Witness)
    y = v.witness.y
    assert y[4] + y[5] + y[6] + y[7] == F(3, 5)


def test_weather_spec_ranges():
    rs = load("appendix_c_free.penv")
    assert feasibility_interval(rs, parse_objective(rs, "P(E3)")) == RatInterval(F(3, 5), F(3, 5))
    assert feasibility_interval(rs, parse_objective(rs, "P(E1 & E2 & E3)")) == RatInterval(F(3, 10), F(21, 50))
    assert feasibility_interval(rs, parse_objective(rs, "P(E1)")) == RatInterval(F(4, 5), F(4, 5))


def test_range_of_inadmissible_spec_is_an_error():
    rs = load("appendix_a.penv")
    with pytest.raises(ValueError):
        feasibility_interval(rs, parse_objective(rs, "P(E3)"))


def test_five_events_algebraic_witness():
    rs = load("five_events.penv", a="1/2")
    v = solve(rs)
    assert v.kind == "admissible" and isinstance(v.witness, IntervalWitness)
    assert v.detail["root_count"] == 2 and v.detail["tallies"] == (2, 0)
    # root near 0.55061 or 0.76910 (float oracle from numpy.roots on z^5 - z + 1/2)
    approx = float(v.witness.interval.mid)
    assert min(abs(approx - 0.550607), abs(approx - 0.769103)) < 1e-4


@pytest.mark.parametrize("a,kind", [("11/20", "inadmissible"), ("106/200", "admissible"), ("108/200", "inadmissible"), ("1/10", "admissible")])
def test_five_events_threshold(a, kind):
    v = solve(load("five_events.penv", a=a))
    assert v.kind == kind
    if kind == "inadmissible":
        assert isinstance(v.certificate, ReductionCertificate)
        assert isinstance(v.certificate.inner, SturmCertificate)


def test_two_event_example():
    v = solve(load("two_event_conditional.penv"))
    assert v.kind == "inadmissible"


@pytest.mark.parametrize("strategy", ["auto", "lp", "sturm", "interval"])
def test_strategies_never_contradict(strategy):
    for name, params in [("appendix_a.penv", {}), ("appendix_c_free.penv", {}), ("two_event_conditional.penv", {})]:
        v = solve(load(name, **params), SolverConfig(strategy=strategy))
        assert v.kind == solve(load(name, **params)).kind


def test_lp_strategy_declines_nonlinear_residual():
    v = solve(load("five_events.penv", a="1/2"), SolverConfig(strategy="lp"))
    assert v.kind == "unknown" and v.reason


def test_classification():
    for name in ("appendix_a.penv", "appendix_c_free.penv", "two_event_conditional.penv"):
        assert classify(atomize(load(name))) is StrategyClass.UNIVARIATE_REDUCIBLE
    assert classify(atomize(load("five_events.penv", a="1/2"))) is StrategyClass.UNIVARIATE_REDUCIBLE
    linear = parse_spec("events A B\nP(A) = 1/2\nP(A given B) >= 1/3\n")
    assert classify(atomize(linear)) is StrategyClass.LINEAR
    general = parse_spec("events A B C\nindependent A, B\nindependent B, C\nP(A & B & C) = 1/5\nP(A given C) = 1/3\n")
    assert classify(atomize(general)) is StrategyClass.GENERAL_POLYNOMIAL


def test_self_check_catches_bad_verdicts():
    rs = load("appendix_a.penv")
    s = atomize(rs)
    with pytest.raises(SoundnessError):
        self_check(Verdict("admissible", Witness((F(1, 8),) * 8)), rs, s)
    with pytest.raises(SoundnessError):
        self_check(Verdict("inadmissible", certificate=FarkasCertificate(((0, F(1)),), F(-1))), rs, s)


# ------------------------------------------------------------------ components
def u(i):
    return Polynomial.var(i, "u")


def test_branch_and_prune_finds_points_and_refutes():
    rows = [(u(0) * u(1) - F(1, 4), Relation.EQ), (u(0) - u(1), Relation.GEQ)]
    status, pt, _ = branch_and_prune(rows, [0, 1], SolverConfig())
    assert status == "sat" and all(rel.holds(p.evaluate(pt)) for p, rel in rows)
    rows = [(u(0) * u(1) - F(3, 2), Relation.GEQ), (u(0) + u(1), Relation.GEQ)]
    status, cert, _ = branch_and_prune(rows, [0, 1], SolverConfig())
    assert status == "unsat" and isinstance(cert, PruneCertificate)
    assert verify_certificate(cert, rows)[0]


def test_branch_and_prune_reports_unknown_with_a_box():
    rows = [(u(0) * u(0) - F(1, 2), Relation.EQ), (u(1) * u(1) - F(1, 3), Relation.EQ), (u(0) * u(1) - u(1) * u(1), Relation.GT)]
    status, (box, row), _ = branch_and_prune(rows, [0, 1], SolverConfig(max_nodes=50))
    assert status == "unknown" and set(box) == {0, 1} and 0 <= row < 3


def test_univariate_analysis():
    z = u(0)
    a = analyze([(z * z - F(1, 2), Relation.EQ), (z - F(1, 2), Relation.GEQ)], 0)
    roots = [c for c in a.cells if c.root]
    assert len(roots) == 1 and roots[0].violated is None
    a = analyze([(z * z - F(1, 2), Relation.EQ), (F(1, 2) - z, Relation.GEQ)], 0)
    assert all(c.violated is not None for c in a.cells)


def test_elimination_steps_replay():
    s = atomize(load("two_event_conditional.penv"))
    coords = build_coordinates(s)
    assert check_coordinates(coords, s) is None
    rows = u_rows(coords, s)
    el = eliminate(rows)
    assert el.contradiction is not None
    cur = list(rows)
    for st in el.steps:
        cur, err = apply_step(cur, st)
        assert err is None
    assert cur == list(el.rows)


def test_chain_is_a_farkas_combination():
    from probenv.certificates import ChainCertificate

    rows = [(Polynomial.var(0, "y") - F(1, 2), Relation.GEQ), (F(1, 4) - Polynomial.var(0, "y"), Relation.GEQ)]
    c = ChainCertificate(((0, F(1)), (1, F(1))), F(1, 4), F(1, 2))
    assert verify_certificate(c, rows)[0]
    f = chain_to_farkas(c)
    assert f.target == -1 and verify_certificate(f, rows)[0]


@pytest.mark.parametrize("num", [104, 105, 106, 107, 108])
def test_five_event_boundary_matches_exact_threshold(num):
    # a = p - p^5 peaks at 4/5^(5/4); a is attainable exactly when a^4 * 3125 <= 256
    a = F(num, 200)
    attainable = a**4 * 3125 <= 256
    v = solve(load("five_events.penv", a=f"{num}/200"))
    assert v.kind == ("admissible" if attainable else "inadmissible")
