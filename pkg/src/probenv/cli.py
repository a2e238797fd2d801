"""Command-line front end: ``probenv <command> <spec> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from importlib import resources
from pathlib import Path

from .atomization import atomize
from .certificates import CertificateError, parse_certificate, serialize, verify_certificate
from .events import Event, atoms_of
from .dutchbook import GameError, believed_ledger, build_game, format_indicator_poly, realized_values
from .feasibility import NonlinearResidualError, SolverConfig, solve
from .report import build_report, exit_code, plain, rat, render
from .requirements import SpecError, parse_objective, parse_spec


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ spec loading
def resolve_spec(name: str) -> tuple[str, str, Path | None]:
    """Return (label, text, path). Bare names fall back to the shipped specs."""
    p = Path(name)
    if p.is_file():
        return p.name, p.read_text(), p
    shipped = resources.files("probenv") / "specs"
    for cand in (p.name, p.name + ".penv"):
        f = shipped / cand
        if f.is_file():
            return cand, f.read_text(), Path(str(f))
    raise UsageError(f"no such spec file: {name}")


def parse_sets(items: list[str]) -> dict[str, str]:
    out = {}
    for it in items or []:
        if "=" not in it:
            raise UsageError(f"--set expects name=value, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load(args):
    label, text, path = resolve_spec(args.spec)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rs = parse_spec(text, parse_sets(args.set))
    return label, rs, path


def config(args) -> SolverConfig:
    return SolverConfig(strategy=args.strategy, max_depth=args.max_depth, max_nodes=args.max_nodes, jobs=args.jobs)


# ------------------------------------------------------------------ commands
def cmd_check(args, out) -> int:
    label, rs, _ = load(args)
    v = solve(rs, config(args))
    rep = build_report(label, rs, atomize(rs), v, timing=args.timing)
    out.write(render(rep, args.format))
    return exit_code(v.kind)


def cmd_atoms(args, out) -> int:
    label, rs, _ = load(args)
    s = atomize(rs)
    if args.format == "text":
        out.write(s.format())
    else:
        rows = [
            {"index": i, "kind": r.kind, "label": r.label, "rel": r.rel.token, "text": line.split("] ", 1)[1]}
            for i, (r, line) in enumerate(zip(s.rows, s.format().splitlines()[-len(s.rows):]))
        ]
        rep = {"spec": label, "spec_digest": s.digest(), "atoms": s.atom_labels, "rows": rows}
        out.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_witness(args, out) -> int:
    label, rs, _ = load(args)
    v = solve(rs, config(args))
    rep = build_report(label, rs, atomize(rs), v, timing=args.timing)
    if args.format == "text":
        if v.witness is None:
            out.write(f"verdict: {v.kind}\nno witness\n")
        else:
            w = rep["witness"]
            if w["type"] == "algebraic":
                out.write(f"# z is the unique root of {w['defining']} in [{w['interval'][0]}, {w['interval'][1]}]\n")
            for a, (val, lab) in enumerate(zip(w["atoms"], w["labels"])):
                out.write(f"y{a} = {val}    # {lab}\n")
    else:
        out.write(json.dumps({"spec": label, "verdict": v.kind, "witness": rep["witness"]}, indent=2, sort_keys=True) + "\n")
    return exit_code(v.kind)


def cmd_certificate(args, out) -> int:
    label, rs, _ = load(args)
    s = atomize(rs)
    if args.verify:
        try:
            cert, h = parse_certificate(Path(args.verify).read_text())
        except OSError as e:
            raise UsageError(f"cannot read certificate: {e}") from e
        ok, why = verify_certificate(cert, s)
        notes = []
        if h not in ("-", s.digest()):
            notes.append(f"certificate hash {h} differs from spec digest {s.digest()}")
        rep = {"spec": label, "spec_digest": s.digest(), "certificate_file": Path(args.verify).name, "verified": ok, "message": why, "notes": notes}
        if args.format == "text":
            out.write(f"spec: {label}\ncertificate: {rep['certificate_file']}\n")
            out.write(("verified: ok\n" if ok else f"verified: FAILED ({why})\n"))
            for n in notes:
                out.write(f"note: {n}\n")
        else:
            out.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
        if not ok:
            print(f"probenv: certificate rejected: {why}", file=sys.stderr)
            return 3
        return exit_code("inadmissible")
    v = solve(rs, config(args))
    if v.certificate is None:
        out.write(f"verdict: {v.kind}\nno certificate\n" if args.format == "text" else json.dumps({"spec": label, "verdict": v.kind, "certificate": None}) + "\n")
        return exit_code(v.kind)
    text = serialize(v.certificate, s.digest())
    if args.format == "text":
        out.write(text)
    else:
        out.write(json.dumps({"spec": label, "verdict": v.kind, "certificate": text}, indent=2, sort_keys=True) + "\n")
    return exit_code(v.kind)


def cmd_interval(args, out) -> int:
    label, rs, _ = load(args)
    obj = parse_objective(rs, args.objective)
    try:
        iv = feasibility_range(rs, obj, config(args))
    except NonlinearResidualError as e:
        print(f"probenv: {e}", file=sys.stderr)
        return exit_code("unknown")
    if iv is None:
        out.write("empty (requirements are not admissible)\n" if args.format == "text" else json.dumps({"spec": label, "objective": args.objective, "interval": None}) + "\n")
        return exit_code("inadmissible")
    if args.format == "text":
        out.write(f"{args.objective} in [{_short(iv.lo)}, {_short(iv.hi)}]\n")
    else:
        out.write(json.dumps({"spec": label, "objective": args.objective, "interval": [rat(iv.lo), rat(iv.hi)]}, indent=2, sort_keys=True) + "\n")
    return exit_code("admissible")


def feasibility_range(rs, obj, cfg):
    from .feasibility import feasibility_interval

    try:
        return feasibility_interval(rs, obj, cfg)
    except NonlinearResidualError:
        raise
    except ValueError as e:
        if "not admissible" in str(e):
            return None
        raise


def _short(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cmd_dutch_book(args, out) -> int:
    label, rs, path = load(args)
    s = atomize(rs)
    notes = []
    if args.certificate:
        cert, _ = parse_certificate(Path(args.certificate).read_text())
        source = Path(args.certificate).name
    else:
        v = solve(rs, config(args))
        if v.kind != "inadmissible":
            print(f"probenv: no Dutch book: verdict is {v.kind}", file=sys.stderr)
            return exit_code(v.kind)
        cert, source = v.certificate, "solver"
        sibling = path.with_suffix(".cert") if path is not None else None
        if type(cert).__name__ == "ReductionCertificate" and sibling is not None and sibling.is_file():
            cert, _ = parse_certificate(sibling.read_text())
            source = sibling.name
            notes.append("solver certificate is a reduction; using the shipped certificate file instead")
    g = build_game(cert, s, args.mode)
    r = realized_values(g)
    led = believed_ledger(g, s, r)
    if led.kind is None and args.mode == "greedy":
        shown = ", ".join(_short(x) for x in sorted(r.values)[:4])
        notes.append(f"greedy game rejected (realized values include {shown}); fell back to the symmetrized construction")
        g = build_game(cert, s, "symmetrized")
        r = realized_values(g)
        led = believed_ledger(g, s, r)
    names = {}
    for i, t in enumerate(s.term_atoms):
        name = rs.prob_terms[i].name[2:-1]
        names[t.bits] = f"[{name}]" if " " in name else name
    for ev in rs.events:
        names.setdefault(atoms_of(Event(ev), rs.n).bits, ev.name)
    for a, lab in enumerate(s.atom_labels):
        names.setdefault(1 << a, f"[{lab}]")
    terms = [
        {
            "role": t.role,
            "label": t.label,
            "believed": t.believed,
            "factors": [format_indicator_poly(f, None, names) for f in t.factors],
        }
        for t in g.terms
    ]
    rep = {
        "spec": label,
        "spec_digest": s.digest(),
        "certificate_source": source,
        "mode": g.mode,
        "copies_used": g.copies_used,
        "nu": g.nu,
        "terms": terms,
        "realized": plain(r.values),
        "outcomes": r.outcomes,
        "exhaustive": r.exhaustive,
        "believed": led.aggregate,
        "kind": led.kind.value if led.kind else None,
        "notes": notes + led.notes,
    }
    if args.format == "text":
        out.write(f"spec: {label}\ncertificate: {source}\nmode: {g.mode}, copies: {g.copies_used}, nu: {g.nu}\n")
        for i, t in enumerate(terms, 1):
            body = " * ".join(f"({f})" for f in t["factors"])
            out.write(f"term {i} [{t['role']}, believed {t['believed']}]: {body}\n")
        vals = ", ".join(_short(x) for x in sorted(r.values))
        out.write(f"realized values: {{{vals}}} over {r.outcomes} outcomes ({r.flag})\n")
        out.write(f"believed: {led.aggregate}\n")
        out.write(f"book: {led.kind.value if led.kind else 'none'}\n")
        for n in rep["notes"]:
            out.write(f"note: {n}\n")
    else:
        out.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    if led.kind is None:
        print("probenv: game rejected: realized values do not form a book", file=sys.stderr)
        return 3
    return exit_code("inadmissible")


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="spec file, or the name of a shipped example")
    common.add_argument("--set", action="append", default=[], metavar="NAME=VALUE", help="override a $parameter")
    common.add_argument("--strategy", choices=["auto", "lp", "sturm", "interval"], default="auto")
    common.add_argument("--max-depth", type=int, default=40)
    common.add_argument("--max-nodes", type=int, default=1_000_000)
    common.add_argument("--format", choices=["text", "structured", "json"], default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-stability)")

    ap = argparse.ArgumentParser(prog="probenv", description="Exact admissibility checking for probabilistic requirements.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="decide admissibility").set_defaults(fn=cmd_check)
    sub.add_parser("atoms", parents=[common], help="print the atom system").set_defaults(fn=cmd_atoms)
    sub.add_parser("witness", parents=[common], help="print a witness distribution").set_defaults(fn=cmd_witness)
    c = sub.add_parser("certificate", parents=[common], help="print or verify a certificate")
    c.add_argument("--verify", metavar="FILE")
    c.set_defaults(fn=cmd_certificate)
    i = sub.add_parser("interval", parents=[common], help="range of a linear objective")
    i.add_argument("objective", help='e.g. "P(E3)"')
    i.set_defaults(fn=cmd_interval)
    d = sub.add_parser("dutch-book", parents=[common], help="compile a Dutch-book game")
    d.add_argument("--mode", choices=["greedy", "symmetrized"], default="greedy")
    d.add_argument("--certificate", metavar="FILE")
    d.set_defaults(fn=cmd_dutch_book)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 3
    if args.format == "json":
        args.format = "structured"
    if args.jobs < 1 or args.max_depth < 0 or args.max_nodes < 1:
        print("probenv: --jobs, --max-depth and --max-nodes must be positive", file=sys.stderr)
        return 3
    try:
        return args.fn(args, out)
    except (UsageError, SpecError, CertificateError, GameError, OSError, ValueError) as e:
        print(f"probenv: {e}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
