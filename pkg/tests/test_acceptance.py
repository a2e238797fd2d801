"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import contextlib
import json
import time
from fractions import Fraction as F


import test_atomization
import test_certificates
import test_events
import test_feasibility
import test_numeric
from conftest import ACCEPTANCE, SPECS, load, spec_text
from probenv.atomization import IntervalWitness, atomize
from probenv.certificates import FarkasCertificate, SturmCertificate, chain_to_farkas, parse_certificate, verify_certificate
from probenv.cli import run
from probenv.dutchbook import BookKind, believed_ledger, realized_values
from probenv.feasibility import solve
from probenv.numeric.interval import RatInterval
from probenv.numeric.polynomial import Polynomial
from probenv.numeric.sturm import sturm_chain, uv_eval
from probenv.requirements import parse_objective

from test_dutchbook import hand_game


@contextlib.contextmanager
def criterion(n, title):
    try:
        yield
    except BaseException:
        ACCEPTANCE[n] = ("FAIL", title)
        raise
    ACCEPTANCE[n] = ("PASS", title)


def timed(f):
    t = time.perf_counter()
    out = f()
    return out, time.perf_counter() - t


def test_criterion_1_three_events():
    with criterion(1, "three-event spec refuted by an exact identity equal to -1"):
        rs = load("appendix_a.penv")
        v, secs = timed(lambda: solve(rs))
        assert v.kind == "inadmissible"
        cert = v.certificate
        sys = atomize(rs)
        assert verify_certificate(cert, sys)[0]
        if not isinstance(cert, FarkasCertificate):
            cert = chain_to_farkas(cert)
        scale = -1 / cert.target
        total = Polynomial.const(0, "y")
        for r, c in cert.coefficients:
            total = total + sys.poly(r).scale(c * scale)
        assert total == Polynomial.const(-1, "y")
        assert secs < 1


def test_criterion_2_weather():
    with criterion(2, "weather spec admissible, P(E3) = 3/5 and y111 in [3/10, 21/50]"):
        rs = load("appendix_c_free.penv")
        t = time.perf_counter()
        assert solve(rs).kind == "admissible"
        assert feasibility_interval_of(rs, "P(E3)") == RatInterval(F(3, 5), F(3, 5))
        assert feasibility_interval_of(rs, "P(E1 & E2 & E3)") == RatInterval(F(3, 10), F(21, 50))
        assert time.perf_counter() - t < 1


def feasibility_interval_of(rs, text):
    from probenv.feasibility import feasibility_interval

    return feasibility_interval(rs, parse_objective(rs, text))


THRESHOLD = 0.5349922  # 4 / 5**(5/4), float oracle


def test_criterion_3_five_events():
    with criterion(3, "five events: a=1/2 two roots, a=11/20 none, boundary between 107/200 and 108/200"):
        v, secs = timed(lambda: solve(load("five_events.penv", a="1/2")))
        assert v.kind == "admissible" and isinstance(v.witness, IntervalWitness)
        assert v.detail["root_count"] == 2 and secs < 1
        v, secs = timed(lambda: solve(load("five_events.penv", a="11/20")))
        assert v.kind == "inadmissible" and secs < 1
        inner = v.certificate.inner
        assert isinstance(inner, SturmCertificate) and inner.tallies[0] - inner.tallies[1] == 0
        assert solve(load("five_events.penv", a="108/200")).kind == "inadmissible"
        assert abs(F(215, 400) - F(THRESHOLD)) < F(5, 1000)
        # required as stated; the threshold sits below 107/200, so this cannot hold
        assert solve(load("five_events.penv", a="107/200")).kind == "admissible"


def test_criterion_4_sturm_remark():
    with criterion(4, "Sturm chain of z - a - z^5 matches the closed-form sign patterns"):
        for a in (F(1, 10), F(1, 2), F(11, 20)):
            # z^5 - z + a is the negated polynomial: same roots, same variation counts
            chain = sturm_chain([a, F(-1), F(0), F(0), F(0), F(1)])
            last = 1 - F(3125) * a**4 / 256
            assert [uv_eval(c, 0) for c in chain] == [a, -1, -a, last]
            assert [uv_eval(c, 1) for c in chain] == [a, 4, F(4, 5) - a, last]


def test_criterion_5_two_events():
    with criterion(5, "two-event spec refuted; transcribed certificate and hand game give a weak book"):
        rs = load("two_event_conditional.penv")
        assert solve(rs).kind == "inadmissible"
        sys = atomize(rs)
        cert, digest = parse_certificate(spec_text("two_event_conditional.cert"))
        assert digest == sys.digest() and verify_certificate(cert, sys)[0]
        g = hand_game()
        r = realized_values(g)
        assert r.values == {0} and r.outcomes == 256 and r.exhaustive
        led = believed_ledger(g, realization=r)
        assert led.aggregate == "> 0" and led.kind is BookKind.WEAK


def test_criterion_6_property_suites():
    with criterion(6, "property suites, at least 1000 cases each, no violations"):
        test_events.test_atom_set_matches_pointwise_evaluation()
        test_atomization.test_atom_rows_agree_with_term_rows()
        test_numeric.test_count_roots_matches_construction()
        test_feasibility.test_verdicts_agree_with_a_grid_of_distributions()
        tc = test_certificates
        farkas = tc.golden("appendix_a.penv")
        sturm = tc.golden("five_events.penv", a="11/20")
        reduction = tc.golden("two_event_conditional.penv")
        sys = atomize(load("two_event_conditional.penv"))
        psatz = parse_certificate(spec_text("two_event_conditional.cert"))[0], sys
        total = tc.all_rejected(tc.farkas_mutants(farkas[0]), farkas[1])
        total += tc.all_rejected(tc.psatz_mutants(psatz[0]), psatz[1])
        total += tc.all_rejected(tc.reduction_mutants(reduction[0]), reduction[1])
        total += tc.all_rejected(tc.reduction_mutants(sturm[0]), sturm[1])
        assert total > 0


def structured_suite():
    out = []
    for name in SPECS:
        extra = ["--set", "a=11/20"] if name == "five_events.penv" else []
        for cmd in ("atoms", "check", "certificate"):
            import io

            buf = io.StringIO()
            code = run([cmd, name, "--format", "structured", *extra], buf)
            out.append((cmd, name, code, buf.getvalue()))
    return out


def test_criterion_7_determinism():
    with criterion(7, "two runs of the golden suite give byte-identical structured reports"):
        first, second = structured_suite(), structured_suite()
        assert first == second
        for cmd, _, _, text in first:
            if cmd == "check":
                json.loads(text)
