from importlib import resources

import pytest

from probenv.atomization import atomize
from probenv.requirements import parse_spec

SPECS = ["appendix_a.penv", "appendix_c_free.penv", "five_events.penv", "two_event_conditional.penv"]


def spec_text(name: str) -> str:
    return (resources.files("probenv") / "specs" / name).read_text()


def load(name: str, **params):
    return parse_spec(spec_text(name), {k: str(v) for k, v in params.items()})


def system(name: str, **params):
    return atomize(load(name, **params))


@pytest.fixture
def specs():
    return SPECS


# ------------------------------------------------------------------ random specs
from fractions import Fraction  # noqa: E402

from hypothesis import strategies as st  # noqa: E402


def bool_text(n):
    names = [f"E{i + 1}" for i in range(n)]
    leaf = st.sampled_from(names)
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            sub.map(lambda a: f"!{a}" if len(a) <= 3 else f"!({a})"),
            st.tuples(sub, sub, st.sampled_from(["&", "|"])).map(lambda t: f"({t[0]} {t[2]} {t[1]})"),
        ),
        max_leaves=3,
    )


probs = st.fractions(min_value=0, max_value=1, max_denominator=4)


@st.composite
def statement(draw, n):
    kind = draw(st.sampled_from(["p", "p", "cond", "indep", "ineq", "neq"]))
    e1, e2 = draw(bool_text(n)), draw(bool_text(n))
    c = draw(probs)
    if kind == "p":
        return f"P({e1}) = {c}"
    if kind == "cond":
        return f"P({e1} given {e2}) = {c}"
    if kind == "indep":
        return f"independent {e1}, {e2}"
    if kind == "ineq":
        op = draw(st.sampled_from(["<=", ">=", "<", ">"]))
        return f"constraint P({e1}) * P({e2}) {op} {c}"
    return f"P({e1}) != {c}"


@st.composite
def random_spec(draw, max_n=3, max_statements=4):
    n = draw(st.integers(1, max_n))
    lines = [draw(statement(n)) for _ in range(draw(st.integers(1, max_statements)))]
    return "events " + " ".join(f"E{i + 1}" for i in range(n)) + "\n" + "\n".join(lines) + "\n"


def grid(n, denom):
    """All atom distributions with the given common denominator."""
    size = 1 << n

    def rec(k, left):
        if k == size - 1:
            yield (left,)
            return
        for v in range(left + 1):
            for rest in rec(k + 1, left - v):
                yield (v,) + rest

    for parts in rec(0, denom):
        yield tuple(Fraction(p, denom) for p in parts)


# ------------------------------------------------------------------ acceptance report
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
