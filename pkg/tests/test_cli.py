import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from probenv.cli import run
from probenv.report import EXIT_CODES

from conftest import SPECS, spec_text

GOLDEN = Path(__file__).parent / "golden"
PARAMS = {"five_events.penv": ["--set", "a=11/20"]}


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def regenerate():
    """Rewrite the golden files from the current build (run by hand, never from tests)."""
    for name in SPECS:
        for cmd in ("atoms", "check", "certificate"):
            _, text = cli(cmd, name, *PARAMS.get(name, []))
            (GOLDEN / f"{name[:-5]}.{cmd}.txt").write_text(text)


@pytest.mark.parametrize("cmd", ["atoms", "check", "certificate"])
@pytest.mark.parametrize("name", SPECS)
def test_golden_output(cmd, name):
    _, text = cli(cmd, name, *PARAMS.get(name, []))
    assert text == (GOLDEN / f"{name[:-5]}.{cmd}.txt").read_text()


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check", "appendix_a"], 1),
        (["check", "appendix_c_free"], 0),
        (["check", "five_events", "--set", "a=1/2"], 0),
        (["check", "five_events", "--set", "a=11/20"], 1),
        (["check", "five_events", "--set", "a=1/2", "--strategy", "lp"], 2),
        (["check", "two_event_conditional"], 1),
        (["check", "no_such_spec"], 3),
        (["check", "five_events"], 0),  # default a = 1/2
        (["check", "five_events", "--set", "b=1"], 3),
        (["check", "five_events", "--set", "a"], 3),
        (["check", "appendix_a", "--max-nodes", "0"], 3),
        (["frobnicate"], 3),
    ],
)
def test_exit_codes(argv, code):
    assert cli(*argv)[0] == code


def test_exit_code_is_a_function_of_the_verdict():
    for name in SPECS:
        argv = ["check", name, "--format", "structured", *PARAMS.get(name, [])]
        code, text = cli(*argv)
        assert code == EXIT_CODES[json.loads(text)["verdict"]]


def test_structured_and_text_agree():
    for name in SPECS:
        extra = PARAMS.get(name, [])
        rep = json.loads(cli("check", name, "--format", "structured", *extra)[1])
        text = cli("check", name, *extra)[1]
        assert f"verdict: {rep['verdict']}" in text
        assert f"digest: {rep['spec_digest']}" in text
        if rep["certificate"]:
            assert rep["certificate"]["text"].splitlines()[0] in text


def test_structured_reports_are_deterministic_and_exact():
    for name in SPECS:
        extra = PARAMS.get(name, [])
        a = cli("check", name, "--format", "structured", *extra)[1]
        b = cli("check", name, "--format", "structured", *extra)[1]
        assert a == b
        assert "seconds" not in json.loads(a)
    rep = json.loads(cli("check", "appendix_c_free", "--format", "structured")[1])
    assert all("/" in v for v in rep["witness"]["atoms"])


def test_timing_is_opt_in():
    rep = json.loads(cli("check", "appendix_a", "--format", "structured", "--timing")[1])
    assert float(rep["seconds"]) >= 0


def test_witness_and_interval():
    code, text = cli("witness", "appendix_c_free")
    assert code == 0 and "y7 = " in text
    code, text = cli("interval", "appendix_c_free", "P(E3)")
    assert code == 0 and text.strip() == "P(E3) in [3/5, 3/5]"
    assert cli("interval", "appendix_a", "P(E3)")[0] == 1


def test_verify_supplied_certificate(tmp_path):
    cert = GOLDEN / "appendix_a.certificate.txt"
    code, text = cli("certificate", "appendix_a", "--verify", str(cert))
    assert code == 1 and "ok" in text
    bad = tmp_path / "bad.cert"
    bad.write_text(cert.read_text().replace("2:100/7", "2:101/7"))
    assert cli("certificate", "appendix_a", "--verify", str(bad))[0] == 3
    code, text = cli("certificate", "appendix_c_free", "--verify", str(cert))
    assert code == 3


def test_dutch_book():
    code, text = cli("dutch-book", "two_event_conditional")
    assert code == 1 and "weak" in text.lower()
    code, text = cli("dutch-book", "appendix_a", "--mode", "symmetrized")
    assert code == 1 and "strong" in text.lower()
    assert cli("dutch-book", "appendix_c_free")[0] == 0


def test_spec_file_path(tmp_path):
    p = tmp_path / "mine.penv"
    p.write_text(spec_text("appendix_a.penv"))
    assert cli("check", str(p))[0] == 1
    p.write_text("events A\nP(A) = 2\n")
    assert cli("check", str(p))[0] == 1  # well formed, unsatisfiable
    p.write_text("events A\nP(B) = 1/2\n")
    assert cli("check", str(p))[0] == 3


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "probenv.cli", "check", "appendix_a"], capture_output=True, text=True)
    assert r.returncode == 1 and "inadmissible" in r.stdout
