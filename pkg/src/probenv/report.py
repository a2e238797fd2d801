"""Structured reports (the source of truth) and their text rendering."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .atomization import IntervalWitness, PolySystem, Witness
from .certificates import kind_of, serialize
from .feasibility import Verdict
from .numeric.interval import RatInterval
from .numeric.polynomial import Polynomial
from .requirements import RequirementSet

EXIT_CODES = {"admissible": 0, "inadmissible": 1, "unknown": 2, "error": 3}


def exit_code(kind: str) -> int:
    return EXIT_CODES[kind]


def rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def plain(v: Any) -> Any:
    """JSON-ready copy: rationals become "p/q" strings, never floats."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return rat(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, RatInterval):
        return [rat(v.lo), rat(v.hi)]
    if isinstance(v, Polynomial):
        return v.format(lambda i: f"z{i}")
    if isinstance(v, dict):
        return {str(k): plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, set, frozenset)):
        items = [plain(x) for x in v]
        return sorted(items) if isinstance(v, (set, frozenset)) else items
    return str(v)


def witness_record(w, rs: RequirementSet) -> dict:
    labels = [a for a in range(1 << rs.n)]
    if isinstance(w, Witness):
        return {"type": "exact", "atoms": [rat(v) for v in w.y], "labels": [_label(rs, a) for a in labels]}
    assert isinstance(w, IntervalWitness)
    return {
        "type": "algebraic",
        "defining": w.defining.format(lambda v: "z"),
        "interval": [rat(w.interval.lo), rat(w.interval.hi)],
        "atoms": [p.format(lambda v: "z") for p in w.y],
        "labels": [_label(rs, a) for a in labels],
    }


def _label(rs: RequirementSet, a: int) -> str:
    from .events import atom_label

    return atom_label(a, rs.events)


def build_report(spec: str, rs: RequirementSet, sys: PolySystem, v: Verdict, timing: bool = False) -> dict:
    detail = {k: x for k, x in v.detail.items() if k != "seconds"}
    rep: dict = {
        "spec": spec,
        "spec_digest": sys.digest(),
        "verdict": v.kind,
        "reason": v.reason,
        "witness": witness_record(v.witness, rs) if v.witness is not None else None,
        "certificate": None,
        "trace": list(v.trace),
        "detail": plain(detail),
        "warnings": list(rs.warnings),
    }
    if v.certificate is not None:
        rep["certificate"] = {
            "kind": kind_of(v.certificate),
            "rows": certificate_rows(v.certificate, sys),
            "text": serialize(v.certificate, sys.digest()),
        }
    if timing:
        rep["seconds"] = f"{v.detail.get('seconds', 0.0):.4f}"
    return rep


def certificate_rows(cert, sys: PolySystem) -> list[str]:
    """Labels of the system rows a certificate combines (top level)."""
    idx: list[int] = []
    for name in ("coefficients", "terms"):
        for r, _ in getattr(cert, name, ()) or ():
            idx.append(r)
    for _, r in getattr(cert, "ideal", ()) or ():
        idx.append(r)
    for J, _ in getattr(cert, "cone", ()) or ():
        idx.extend(J)
    for r, _ in getattr(cert, "monoid", ()) or ():
        idx.append(r)
    out = []
    for r in sorted(set(idx)):
        if 0 <= r < len(sys.rows):
            out.append(f"r{r}: {sys.rows[r].label}")
    return out


def render_text(rep: dict) -> str:
    lines = [f"spec: {rep['spec']}", f"digest: {rep['spec_digest']}", f"verdict: {rep['verdict']}"]
    if rep.get("reason"):
        lines.append(f"reason: {rep['reason']}")
    w = rep.get("witness")
    if w:
        if w["type"] == "algebraic":
            lines.append(f"witness: algebraic, z is the root of {w['defining']} in [{w['interval'][0]}, {w['interval'][1]}]")
        else:
            lines.append("witness: exact")
        for a, (val, lab) in enumerate(zip(w["atoms"], w["labels"])):
            lines.append(f"  y{a} = {val}    # {lab}")
    c = rep.get("certificate")
    if c:
        lines.append(f"certificate: {c['kind']}")
        for r in c["rows"]:
            lines.append(f"  uses {r}")
        lines += ["  " + t for t in c["text"].rstrip("\n").splitlines()]
    if rep.get("detail"):
        for k in sorted(rep["detail"]):
            lines.append(f"{k}: {_flat(rep['detail'][k])}")
    for t in rep.get("trace", []):
        lines.append(f"trace: {t}")
    for wmsg in rep.get("warnings", []):
        lines.append(f"warning: {wmsg}")
    if "seconds" in rep:
        lines.append(f"seconds: {rep['seconds']}")
    return "\n".join(lines) + "\n"


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_flat(x)}" for k, x in v.items()) + "}"
    return str(v)


def render(rep: dict, fmt: str) -> str:
    if fmt == "text":
        return render_text(rep)
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"
