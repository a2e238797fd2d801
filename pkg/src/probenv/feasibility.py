"""Admissibility decision: is the atomized system feasible?

Strategy ladder (``auto``):

1. Farkas test on the linear rows alone (cheap, and enough for many
   contradictory setups).
2. Fully linear systems: exact LP with strict and ``!=`` rows handled.
3. Otherwise change to solver coordinates and run the elimination ladder;
   the residual is then decided by LP (linear), Sturm analysis (one
   variable) or interval branch-and-prune (anything else, may end Unknown).

Every Admissible verdict is re-checked against the requirements and every
Inadmissible verdict against the atomized system before it is returned.
"""

from __future__ import annotations

import itertools

import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .atomization import IntervalWitness, PolySystem, Witness, atomize, verify_witness
from .certificates import (
    Cell,
    FarkasCertificate,
    PruneCertificate,
    PruneLeaf,
    PruneSplit,
    PsatzCertificate,
    ReductionCertificate,
    SturmCertificate,
    interval_violates,
    verify_certificate,
)
from .lp import LinRow, LPStatus, farkas_multipliers, solve_lp
from .numeric.interval import RatInterval, interval_eval
from .numeric.polynomial import Polynomial
from .numeric.rational import format_fraction
from .numeric.sturm import DEFAULT_TOLERANCE, count_roots_closed
from .reduction import (
    Coordinates,
    Elimination,
    Subst,
    back_substitute,
    build_coordinates,
    eliminate,
    u_rows,
    x_in_u,
    y_from_u,
)
from .requirements import Relation, RequirementSet
from .univariate import analyze, satisfying_cell

UNIT = RatInterval(Fraction(0), Fraction(1))


class StrategyClass(Enum):
    LINEAR = "linear"
    UNIVARIATE_REDUCIBLE = "univariate-reducible"
    GENERAL_POLYNOMIAL = "general-polynomial"


@dataclass(frozen=True)
class SolverConfig:
    strategy: str = "auto"  # auto | lp | sturm | interval
    max_depth: int = 40
    max_nodes: int = 1_000_000
    root_tolerance: Fraction = DEFAULT_TOLERANCE
    jobs: int = 1

    def __post_init__(self):
        if self.strategy not in ("auto", "lp", "sturm", "interval"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.max_depth <= 0 or self.max_nodes <= 0 or self.root_tolerance <= 0 or self.jobs <= 0:
            raise ValueError("solver limits must be positive")


@dataclass
class Verdict:
    kind: str  # admissible | inadmissible | unknown
    witness: Witness | IntervalWitness | None = None
    certificate: object = None
    reason: str = ""
    trace: list[str] = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return self.kind == "admissible"


class SoundnessError(AssertionError):
    pass


# ------------------------------------------------------------------ helpers
def _rows_of(sys: PolySystem, idx: Sequence[int] | None = None) -> list[tuple[Polynomial, Relation]]:
    idx = range(len(sys.rows)) if idx is None else idx
    return [(sys.poly(i), sys.rows[i].rel) for i in idx]


def _row_degree(sys: PolySystem, i: int) -> int:
    row = sys.rows[i]
    return (row.xpoly if row.xpoly is not None else row.ypoly).degree()


def linear_rows(sys: PolySystem) -> list[int]:
    return [i for i in range(len(sys.rows)) if _row_degree(sys, i) <= 1]


def is_linear(sys: PolySystem) -> bool:
    return len(linear_rows(sys)) == len(sys.rows)


def reduce_system(sys: PolySystem, nonlinear: bool = True) -> tuple[Coordinates, Elimination]:
    coords = build_coordinates(sys)
    return coords, eliminate(u_rows(coords, sys), nonlinear=nonlinear)


def eliminate_linear(sys: PolySystem) -> tuple[Coordinates, Elimination]:
    """Gaussian elimination on the degree-one equality rows only."""
    return reduce_system(sys, nonlinear=False)


def _residual_shape(el: Elimination) -> str:
    act = el.active_rows()
    if all(el.rows[i][0].degree() <= 1 for i in act):
        return "linear"
    if len(el.variables()) <= 1:
        return "univariate"
    return "general"


def classify(sys: PolySystem, eliminated: bool = True) -> StrategyClass:
    """Linear if every row has degree <= 1; otherwise inspect the eliminated residual."""
    if is_linear(sys):
        return StrategyClass.LINEAR
    if not eliminated:
        return StrategyClass.GENERAL_POLYNOMIAL
    _, el = reduce_system(sys)
    if el.contradiction is not None or _residual_shape(el) != "general":
        return StrategyClass.UNIVARIATE_REDUCIBLE
    return StrategyClass.GENERAL_POLYNOMIAL


# ------------------------------------------------------------------ linear
@dataclass
class LinearOutcome:
    point: dict | None = None
    farkas: FarkasCertificate | None = None  # indices into the given rows
    psatz: PsatzCertificate | None = None
    note: str = ""


def _lin(rows: Sequence[tuple[Polynomial, Relation]]) -> list[LinRow]:
    return [LinRow.of(p, rel) for p, rel in rows]


def _farkas(lrows: list[LinRow], strict: bool) -> FarkasCertificate | None:
    mult = farkas_multipliers(lrows, strict=strict)
    if mult is None:
        return None
    target = sum((c * lrows[i].const for i, c in mult.items()), Fraction(0))
    return FarkasCertificate(tuple(sorted(mult.items())), target)


def lp_decide(rows: Sequence[tuple[Polynomial, Relation]], variables: Sequence[int] = ()) -> LinearOutcome:
    """Exact decision of a linear system with ``=``, ``>=``, ``>`` and ``!=`` rows."""
    lrows = _lin(rows)
    cert = _farkas(lrows, strict=False)
    if cert is not None:
        return LinearOutcome(farkas=cert, note="nonstrict relaxation empty")
    vs = sorted(set(variables) | {v for r in lrows for v in r.coeffs})
    gts = [i for i, r in enumerate(lrows) if r.rel is Relation.GT]
    base = [r for r in lrows if r.rel in (Relation.EQ, Relation.GEQ)]
    region = list(base)
    if gts:
        t = max(vs, default=-1) + 1
        slack = [LinRow({**lrows[i].coeffs, t: Fraction(-1)}, lrows[i].const, Relation.GEQ) for i in gts]
        bounds = [LinRow({t: Fraction(1)}, Fraction(0), Relation.GEQ), LinRow({t: Fraction(-1)}, Fraction(1), Relation.GEQ)]
        res = solve_lp(base + slack + bounds, {t: Fraction(1)}, maximize=True, variables=vs)
        if res.status is not LPStatus.OPTIMAL:
            raise SoundnessError("slack LP failed on a nonempty relaxation")
        if res.value == 0:
            cert = _farkas(lrows, strict=True)
            if cert is None:
                raise SoundnessError("strict rows forced tight but no certificate found")
            return LinearOutcome(farkas=cert, note="strict rows cannot all hold")
        half = res.value / 2
        region = base + [LinRow(lrows[i].coeffs, lrows[i].const - half, Relation.GEQ) for i in gts]
        point = {v: res.point.get(v, Fraction(0)) for v in vs}
    else:
        res = solve_lp(base, variables=vs)
        point = {v: res.point.get(v, Fraction(0)) for v in vs}
    neqs = [i for i, r in enumerate(lrows) if r.rel is Relation.NEQ]
    if not neqs:
        return LinearOutcome(point=point)
    return _avoid_hyperplanes(rows, lrows, region, neqs, point, vs)


def _avoid_hyperplanes(rows, lrows, region, neqs, point, vs) -> LinearOutcome:
    done: list[int] = []
    for k in neqs:
        h = lrows[k]
        if h.value(point) != 0:
            done.append(k)
            continue
        far = None
        for sense in (True, False):
            # cap |h| so an unbounded region still yields an optimal point
            sign = Fraction(-1) if sense else Fraction(1)
            cap = LinRow({v: sign * c for v, c in h.coeffs.items()}, sign * h.const + 1, Relation.GEQ)
            res = solve_lp(region + [cap], dict(h.coeffs), maximize=sense, variables=vs)
            if res.status is LPStatus.OPTIMAL and h.value(res.point) != 0:
                far = {v: res.point.get(v, Fraction(0)) for v in vs}
                break
        if far is None:
            return LinearOutcome(psatz=_vanishing_psatz(rows, lrows, k), note=f"row {k} vanishes on the feasible set")
        q = 2
        while True:
            t = Fraction(1, q)
            cand = {v: (1 - t) * point[v] + t * far[v] for v in vs}
            if all(lrows[j].value(cand) != 0 for j in done + [k]):
                point = cand
                break
            q += 1
        done.append(k)
    return LinearOutcome(point=point)


def _vanishing_psatz(rows, lrows, k) -> PsatzCertificate:
    """``h`` vanishes on the polytope: ``-h`` and ``h`` are both nonnegative combinations,
    so ``h*h + sum(l_i l'_j g_i g_j) + ideal terms == 0``."""
    h = rows[k][0]
    active = [i for i, r in enumerate(lrows) if r.rel is not Relation.NEQ]
    reps = []
    for target in (h.scale(-1), h):
        mult = _represent([lrows[i] for i in active], LinRow.of(target, Relation.EQ))
        if mult is None:
            raise SoundnessError("vanishing row has no linear representation")
        reps.append({active[i]: c for i, c in mult.items()})
    neg, pos = reps  # -h = sum neg_i g_i,  h = sum pos_j g_j
    ideal: dict[int, Polynomial] = {}
    cone: dict[tuple, Fraction] = {}
    # h^2 = h * h = (-sum neg_i g_i) * (sum pos_j g_j) -> h^2 + sum neg_i pos_j g_i g_j == 0
    for i, a in neg.items():
        for j, b in pos.items():
            ri, rj = rows[i][1], rows[j][1]
            if ri is Relation.EQ:
                ideal[i] = ideal.get(i, Polynomial.const(0)) + rows[j][0].scale(a * b)
            elif rj is Relation.EQ:
                ideal[j] = ideal.get(j, Polynomial.const(0)) + rows[i][0].scale(a * b)
            else:
                key = tuple(sorted((i, j)))
                cone[key] = cone.get(key, 0) + a * b
    ideal_t = tuple((t, r) for r, t in sorted(ideal.items()) if not t.is_zero())
    cone_t = tuple((J, ((w, Polynomial.const(1)),)) for J, w in sorted(cone.items()) if w)
    return PsatzCertificate(ideal_t, cone_t, ((k, 2),))


def _represent(lrows: list[LinRow], target: LinRow) -> dict[int, Fraction] | None:
    vs = sorted({v for r in lrows for v in r.coeffs} | set(target.coeffs))
    cert_rows = [LinRow({i: r.coeffs.get(v, 0) for i, r in enumerate(lrows)}, -target.coeffs.get(v, 0), Relation.EQ) for v in vs]
    cert_rows.append(LinRow({i: r.const for i, r in enumerate(lrows)}, -target.const, Relation.EQ))
    nonneg = [i for i, r in enumerate(lrows) if r.rel is not Relation.EQ]
    res = solve_lp(cert_rows, nonneg=nonneg, variables=range(len(lrows)))
    if res.status is not LPStatus.OPTIMAL:
        return None
    return {i: c for i, c in res.point.items() if c}


def lp_feasible(sys: PolySystem) -> Verdict:
    """Decide a linear atomized system exactly over the atom variables."""
    out = lp_decide(_rows_of(sys), variables=range(sys.num_atoms))
    if out.point is not None:
        y = tuple(out.point.get(a, Fraction(0)) for a in range(sys.num_atoms))
        return Verdict("admissible", Witness(y), trace=["lp: exact simplex on atom variables"])
    cert = out.farkas or out.psatz
    return Verdict("inadmissible", certificate=cert, trace=[f"lp: {out.note}"])


# ------------------------------------------------------------------ branch and prune
@dataclass
class _Budget:
    nodes: int = 0


def branch_and_prune(
    rows: Sequence[tuple[Polynomial, Relation]], variables: Sequence[int], cfg: SolverConfig
) -> tuple[str, object, dict]:
    """DFS over boxes of ``[0,1]^variables``.

    Returns ("sat", point, stats), ("unsat", PruneCertificate, stats) or
    ("unknown", (box, row), stats).
    """
    vars_ = tuple(sorted(variables))
    budget = _Budget()
    undecided: list = []
    root_box = {v: UNIT for v in vars_}

    def visit(box: dict, depth: int):
        budget.nodes += 1
        for i, (p, rel) in enumerate(rows):
            if interval_violates(p, rel, box):
                return PruneLeaf(i)
        pt = _try_point(rows, vars_, box, thorough=depth <= THOROUGH_DEPTH)
        if pt is not None:
            return ("sat", pt)
        if depth >= cfg.max_depth or budget.nodes >= cfg.max_nodes:
            undecided.append((box, _blocking_row(rows, box)))
            return None
        v = _split_var(rows, vars_, box)
        lo_iv, hi_iv = box[v].split()
        kids = []
        for part in (lo_iv, hi_iv):
            sub = dict(box)
            sub[v] = part
            r = visit(sub, depth + 1)
            if isinstance(r, tuple):
                return r
            kids.append(r)
        if any(k is None for k in kids):
            return None
        return PruneSplit(v, box[v].mid, kids[0], kids[1])

    probe = _grid_probe(rows, vars_)
    if probe is not None:
        return "sat", probe, {"nodes": 0}
    result = visit(root_box, 0)
    stats = {"nodes": budget.nodes}
    if isinstance(result, tuple):
        return "sat", result[1], stats
    if result is None:
        box, row = min(undecided, key=lambda t: sum(iv.width for iv in t[0].values()))
        return "unknown", (box, row), stats
    return "unsat", PruneCertificate(vars_, result), stats


def _surely_holds(p: Polynomial, rel: Relation, box: dict) -> bool:
    iv = interval_eval(p, box)
    if rel is Relation.EQ:
        return iv.lo == iv.hi == 0
    if rel is Relation.GEQ:
        return iv.lo >= 0
    if rel is Relation.GT:
        return iv.lo > 0
    return not iv.contains_zero()


def _split_var(rows, vars_, box) -> int:
    """Widest variable among those in rows the box does not already satisfy."""
    live = set()
    for p, rel in rows:
        if not p.is_constant() and not _surely_holds(p, rel, box):
            live.update(p.variables())
    pool = [v for v in vars_ if v in live and box[v].width > 0] or list(vars_)
    return max(pool, key=lambda u: (box[u].width, -u))


def _holds(rows, point) -> bool:
    return all(rel.holds(p.evaluate(point)) for p, rel in rows)


GRID_PROBE_LIMIT = 3**8


def _grid_probe(rows, vars_) -> dict | None:
    """Try every point of {0, 1/2, 1}^k before subdividing (small k only)."""
    if 3 ** len(vars_) > GRID_PROBE_LIMIT:
        return None
    levels = (Fraction(0), Fraction(1), Fraction(1, 2))
    for combo in itertools.product(levels, repeat=len(vars_)):
        pt = dict(zip(vars_, combo))
        if _holds(rows, pt):
            return pt
    return None


THOROUGH_DEPTH = 8


def _try_point(rows, vars_, box, thorough: bool = True) -> dict | None:
    center = {v: box[v].mid for v in vars_}
    for pt in (center, {v: box[v].lo for v in vars_}, {v: box[v].hi for v in vars_}):
        if _holds(rows, pt):
            return pt
    if not thorough:
        return None
    if all(p.degree() <= 1 for p, _ in rows):
        bounds = [(Polynomial.var(v, "u") - box[v].lo, Relation.GEQ) for v in vars_]
        bounds += [(box[v].hi - Polynomial.var(v, "u"), Relation.GEQ) for v in vars_]
        out = lp_decide(list(rows) + bounds, variables=vars_)
        return None if out.point is None else {v: out.point.get(v, Fraction(0)) for v in vars_}
    # nonlinear coordinates pinned to the center leaves a linear system in the rest
    curved = {v for p, _ in rows for m in p.terms if len(m) > 1 or any(e > 1 for _, e in m) for v, _ in m}
    if curved and not curved >= set(vars_):
        pinned = {u: Polynomial.const(center[u], "u") for u in curved}
        lin = [(p.substitute(pinned), rel) for p, rel in rows]
        free = [v for v in vars_ if v not in curved]
        lin += [(Polynomial.var(v, "u") - box[v].lo, Relation.GEQ) for v in free]
        lin += [(box[v].hi - Polynomial.var(v, "u"), Relation.GEQ) for v in free]
        if all(q.is_constant() or q.degree() <= 1 for q, _ in lin):
            out = lp_decide(lin, variables=free)
            if out.point is not None:
                pt = {v: center[v] for v in curved}
                pt.update({v: out.point.get(v, Fraction(0)) for v in free})
                if _holds(rows, pt):
                    return pt
    # one free coordinate at a time, the rest pinned to the center
    for v in vars_:
        pinned = {u: center[u] for u in vars_ if u != v}
        uni = [(p.substitute({u: Polynomial.const(c, p.universe) for u, c in pinned.items()}), rel) for p, rel in rows]
        if any(q.variables() and q.variables() != [v] for q, _ in uni):
            continue
        try:
            a = analyze(uni, v, box[v])
        except ValueError:
            continue
        for cell in a.cells:
            if cell.violated is None and cell.where.lo == cell.where.hi:
                pt = dict(pinned)
                pt[v] = cell.where.lo
                if _holds(rows, pt):
                    return pt
    return None


def _blocking_row(rows, box) -> int:
    best, width = 0, Fraction(-1)
    for i, (p, _) in enumerate(rows):
        if p.is_constant():
            continue
        w = interval_eval(p, box).width
        if w > width:
            best, width = i, w
    return best


# ------------------------------------------------------------------ univariate
def univariate_decide(rows: Sequence[tuple[Polynomial, Relation]], var: int, cfg: SolverConfig):
    """Return ("sat", Fraction), ("irrational", (defining, interval)) or ("unsat", SturmCertificate)."""
    a = analyze(rows, var, UNIT, cfg.root_tolerance)
    cell = satisfying_cell(a)
    if cell is None:
        cells = tuple(Cell(c.root, c.where, c.violated) for c in a.cells)
        cert = SturmCertificate(var, Polynomial.from_univariate(a.defining, 0, "z"), UNIT, a.tallies, cells)
        return "unsat", cert, a
    if cell.where.lo == cell.where.hi:
        return "sat", cell.where.lo, a
    return "irrational", (Polynomial.from_univariate(a.defining, 0, "z"), cell.where), a


# ------------------------------------------------------------------ driver
def _remap(cert, idx: Sequence[int]):
    """Rewrite row indices of a certificate over a row subset into the full list."""
    if isinstance(cert, FarkasCertificate):
        return FarkasCertificate(tuple((idx[r], c) for r, c in cert.coefficients), cert.target)
    return PsatzCertificate(
        tuple((t, idx[r]) for t, r in cert.ideal),
        tuple((tuple(idx[r] for r in J), sos) for J, sos in cert.cone),
        tuple((idx[r], k) for r, k in cert.monoid),
    )


def _constant_certificate(rows, i) -> object:
    p, rel = rows[i]
    c = p.constant()
    if rel is Relation.NEQ:
        return PsatzCertificate((), (), ((i, 2),))
    if rel is Relation.GT and c == 0:
        return FarkasCertificate(((i, Fraction(1)),), Fraction(0))
    return FarkasCertificate(((i, -1 / c if rel is Relation.EQ else 1 / abs(c)),), -1 if c else Fraction(0))


def _finish_point(sys: PolySystem, coords: Coordinates, el: Elimination, values: Mapping) -> Witness:
    vals = back_substitute(el.steps, dict(values))
    full = {k: vals.get(k, Fraction(0)) for k in range(coords.size)}
    ys = y_from_u(coords, full)
    return Witness(tuple(p.constant() for p in ys))


def _finish_interval(sys, coords, el, var, defining, interval) -> IntervalWitness:
    z = Polynomial.var(0, "z")
    vals = back_substitute(el.steps, {var: z})
    full = {k: vals.get(k, Fraction(0)) for k in range(coords.size)}
    ys = y_from_u(coords, full)
    return IntervalWitness(tuple(ys), defining, interval)


def _reduced_verdict(sys: PolySystem, cfg: SolverConfig, trace: list[str], nonlinear: bool = True) -> Verdict:
    coords, el = reduce_system(sys, nonlinear=nonlinear)
    trace.append(f"coordinates: {coords.size} (sure event, {len(sys.term_atoms)} terms, unit atoms)")
    trace.append(f"elimination: {len(el.steps)} steps")
    detail: dict = {"steps": len(el.steps)}

    def reduction(inner) -> ReductionCertificate:
        return ReductionCertificate(coords, tuple(el.steps), inner)

    if el.contradiction is not None:
        trace.append(f"elimination: row {el.contradiction} became a false constant")
        return Verdict("inadmissible", certificate=reduction(_constant_certificate(el.rows, el.contradiction)), trace=trace)
    act = el.active_rows()
    vars_ = el.variables()
    shape = _residual_shape(el)
    detail["residual_rows"] = len(act)
    detail["residual_vars"] = len(vars_)
    if cfg.strategy == "interval":
        shape = "general"
    trace.append(f"residual: {len(act)} rows in {len(vars_)} variables ({shape})")
    if cfg.strategy == "lp" and shape != "linear":
        return Verdict("unknown", reason="lp strategy needs a linear residual", trace=trace, detail=detail)
    if cfg.strategy == "sturm" and shape == "general":
        return Verdict("unknown", reason="sturm strategy needs a univariate residual", trace=trace, detail=detail)
    if shape == "linear":
        out = lp_decide(el.rows, variables=vars_)
        if out.point is not None:
            trace.append("residual: exact LP point")
            return Verdict("admissible", _finish_point(sys, coords, el, out.point), trace=trace, detail=detail)
        trace.append(f"residual: {out.note}")
        return Verdict("inadmissible", certificate=reduction(out.farkas or out.psatz), trace=trace, detail=detail)
    if shape == "univariate":
        var = vars_[0] if vars_ else 0
        status, payload, analysis = univariate_decide(el.rows, var, cfg)
        detail["roots"] = len([c for c in analysis.cells if c.root])
        detail["tallies"] = analysis.tallies
        trace.append(f"sturm: u{var} on [0, 1], variations {analysis.tallies[0]} -> {analysis.tallies[1]}")
        if status == "sat":
            return Verdict("admissible", _finish_point(sys, coords, el, {var: payload}), trace=trace, detail=detail)
        if status == "irrational":
            defining, iv = payload
            detail["root_count"] = count_roots_closed(defining, UNIT)
            return Verdict("admissible", _finish_interval(sys, coords, el, var, defining, iv), trace=trace, detail=detail)
        return Verdict("inadmissible", certificate=reduction(payload), trace=trace, detail=detail)
    flat = [i for i in act if el.rows[i][0].degree() <= 1]
    if flat:
        out = lp_decide([el.rows[i] for i in flat], variables=vars_)
        if out.point is None:
            trace.append(f"residual linear rows ({len(flat)}): {out.note}")
            inner = _remap(out.farkas or out.psatz, flat)
            return Verdict("inadmissible", certificate=reduction(inner), trace=trace, detail=detail)
    live = [el.rows[i] for i in range(len(el.rows))]
    status, payload, stats = branch_and_prune(live, vars_, cfg)
    detail.update(stats)
    trace.append(f"branch-and-prune: {stats['nodes']} boxes")
    if status == "sat":
        return Verdict("admissible", _finish_point(sys, coords, el, payload), trace=trace, detail=detail)
    if status == "unsat":
        return Verdict("inadmissible", certificate=reduction(payload), trace=trace, detail=detail)
    box, row = payload
    detail["box"] = {f"u{v}": (format_fraction(iv.lo), format_fraction(iv.hi)) for v, iv in box.items()}
    detail["blocking_row"] = row
    return Verdict("unknown", reason="node or depth limit reached", trace=trace, detail=detail)


def solve_system(sys: PolySystem, cfg: SolverConfig = SolverConfig()) -> Verdict:
    trace: list[str] = [f"strategy: {cfg.strategy}"]
    linear = is_linear(sys)
    if cfg.strategy in ("auto", "lp") and not linear:
        lin = linear_rows(sys)
        lrows = _lin(_rows_of(sys, lin))
        cert = _farkas(lrows, strict=False)
        if cert is not None:
            trace.append(f"linear subsystem ({len(lin)} rows): Farkas combination found")
            mapped = FarkasCertificate(tuple((lin[i], c) for i, c in cert.coefficients), cert.target)
            return Verdict("inadmissible", certificate=mapped, trace=trace)
        trace.append(f"linear subsystem ({len(lin)} rows): feasible")
    if linear and cfg.strategy in ("auto", "lp"):
        v = lp_feasible(sys)
        v.trace = trace + v.trace
        return v
    return _reduced_verdict(sys, cfg, trace)


def solve(rs: RequirementSet, cfg: SolverConfig = SolverConfig()) -> Verdict:
    """Decide admissibility; the verdict is checked before it is returned."""
    t0 = time.perf_counter()
    sys = atomize(rs)
    v = solve_system(sys, cfg)
    self_check(v, rs, sys)
    v.detail["seconds"] = time.perf_counter() - t0
    return v


def self_check(v: Verdict, rs: RequirementSet, sys: PolySystem) -> None:
    if v.kind == "admissible":
        ok, bad = verify_witness(v.witness, rs)
        if not ok:
            raise SoundnessError(f"witness fails: {bad[0].message}")
    elif v.kind == "inadmissible":
        ok, why = verify_certificate(v.certificate, sys)
        if not ok:
            raise SoundnessError(f"certificate fails: {why}")


# ------------------------------------------------------------------ ranges
class NonlinearResidualError(ValueError):
    pass


def feasibility_interval(rs: RequirementSet, objective: Polynomial, cfg: SolverConfig = SolverConfig()) -> RatInterval:
    """Exact min and max of a linear objective over the feasible set.

    The objective is a polynomial over probability terms (universe ``"x"``,
    indices as in ``rs.prob_terms``) or over atoms (universe ``"y"``). The
    system must become linear after elimination.
    """
    if objective.degree() > 1:
        raise ValueError("objective must be linear")
    sys = atomize(rs)
    coords, el = reduce_system(sys)
    if el.contradiction is not None:
        raise ValueError("requirements are not admissible; the range is empty")
    act = el.active_rows()
    if any(el.rows[i][0].degree() > 1 for i in act):
        raise NonlinearResidualError("residual after elimination is not linear")
    if objective.universe == "y":
        obj = objective.substitute(dict(enumerate(coords.inverse)), universe="u")
    else:
        obj = objective.substitute(x_in_u(coords, sys), universe="u")
    for st in el.steps:
        if isinstance(st, Subst):
            obj = obj.substitute({st.var: st.expr}, "u")
    rows = [el.rows[i] for i in act]
    if lp_decide(rows).point is None:
        raise ValueError("requirements are not admissible; the range is empty")
    lrows = [r for r in _lin(rows) if r.rel is not Relation.NEQ]
    vs = sorted({v for r in lrows for v in r.coeffs} | set(obj.variables()))
    ends = []
    for sense in (False, True):
        res = solve_lp(lrows, obj.linear_coefficients(), maximize=sense, variables=vs)
        if res.status is not LPStatus.OPTIMAL:
            raise AssertionError("objective unbounded under normalization")
        ends.append(res.value + obj.constant())
    return RatInterval(ends[0], ends[1])
