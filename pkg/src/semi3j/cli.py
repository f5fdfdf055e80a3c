"""Command-line front end: ``semi3j <command> [options]``.

Commands: eval, scan, scaling, geometry, maslov, validate, bench.  Exit status
is 0 on success, 1 when a validation fails and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .exact import (
    HalfInt,
    ThreeJArgs,
    _exact_threej_twice,
    exact_threej,
    orthogonality_residual,
    selection_check,
    threej_m_row,
)
from .geometry import (
    CAUSTIC_BAND,
    DegenerateBeta,
    Region,
    TriangleViolation,
    classify_region,
    lie_poisson,
    orientation,
    projected_area,
    rotated_config,
    tetra_bracket,
    triangle_shape,
)
from .quantization import (
    ContourSpec,
    basis_contour_data,
    contour_action,
    homotopy_consistency,
    maslov_winding,
    random_jm_base,
    random_wigner_base,
)
from .schwinger import Flow, action_by_arg, flow_action_integral, intersection_spinors, project
from .semiclassical import action_phase, asymptotic_threej
from .studies import ScanRow, loglog_slope, scan_m1, scaling_study

SCAN_HEADER = ["m1", "m2", "m3", "exact", "asymptotic", "region", "S", "delta_z", "abs_err"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits; blank for missing values."""
    if x is None:
        return ""
    if isinstance(x, HalfInt):
        x = x.value
    if isinstance(x, (int, np.integer)) or (isinstance(x, Fraction) and x.denominator == 1):
        return str(int(x))
    return f"{float(x):.12g}"


def _number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _quantum(values) -> list[HalfInt]:
    try:
        return [HalfInt.of(v) for v in values]
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))


def _args(ns) -> ThreeJArgs:
    j = _quantum(ns.j)
    m = _quantum(ns.m)
    return ThreeJArgs(*j, *m)


def _emit_table(rows: list[list], header: list[str], out: str) -> str:
    if out == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if not isinstance(x, str) else x for x in r])
    return buf.getvalue()


def _emit_record(rec: dict, out: str) -> str:
    if out == "json":
        return json.dumps(rec, indent=1) + "\n"
    width = max(len(k) for k in rec)
    lines = []
    for k, v in rec.items():
        v = v if isinstance(v, str) else fmt(v)
        lines.append(f"{k:<{width}}  {v}")
    return "\n".join(lines) + "\n"


# -- eval ---------------------------------------------------------------------


def cmd_eval(ns) -> int:
    args = _args(ns)
    ex = exact_threej(args)
    res = asymptotic_threej(args, band=ns.caustic_band)
    exf = float(ex)
    viol = selection_check(args)
    rel = None
    if res.value is not None and exf != 0.0:
        rel = abs(res.value - exf) / abs(exf)
    rec = {
        "args": str(args),
        "exact": exf,
        "exact_surd": str(ex),
        "asymptotic": res.value,
        "region": "n/a" if viol else str(res.region),
        "S": res.S,
        "delta_z": res.delta_z,
        "rel_err": rel,
    }
    if ns.out == "json":
        sys.stdout.write(_emit_record(rec, "json"))
    else:
        sys.stdout.write(_emit_record(rec, "text"))
    return 0


# -- scan ---------------------------------------------------------------------


def _row_fields(r: ScanRow) -> list:
    return [r.m1, r.m2, r.m3, r.exact, r.asymptotic,
            "n/a" if r.region is None else str(r.region), r.S, r.delta_z, r.abs_err]


def _scan_worker(job):
    j, u1, band = job
    return [_row_fields(r) for r in scan_m1(j, HalfInt(u1), band)]


def run_scan(j, m1=None, band=CAUSTIC_BAND, threads: int = 1) -> list[list]:
    """Rows sorted by ``(m1, m2)``; ``threads > 1`` splits the work by ``m1``."""
    j = [str(x) for x in j]
    tw1 = HalfInt.of(j[0]).twice
    m1s = [HalfInt.of(m1).twice] if m1 is not None else list(range(-tw1, tw1 + 1, 2))
    jobs = [(j, u1, band) for u1 in m1s]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_scan_worker, jobs))
    else:
        parts = [_scan_worker(job) for job in jobs]
    return [row for part in parts for row in part]


def cmd_scan(ns) -> int:
    j = _quantum(ns.j)
    a, b, c = (x.twice for x in j)
    if a + b < c or b + c < a or c + a < b or (a + b + c) % 2:
        raise UsageError(f"({' '.join(map(str, j))}) is not an admissible triple")
    m1 = None
    if ns.m1 is not None:
        m1 = _quantum([ns.m1])[0]
        if abs(m1.twice) > a or (a - m1.twice) % 2:
            raise UsageError(f"m1 = {m1} is out of range for j1 = {j[0]}")
    rows = run_scan(j, m1, ns.caustic_band, ns.threads)
    if ns.out == "json":
        rows = [[fmt(x) if not isinstance(x, str) else x for x in r] for r in rows]
    sys.stdout.write(_emit_table(rows, SCAN_HEADER, ns.out))
    return 0


# -- scaling ------------------------------------------------------------------


def cmd_scaling(ns) -> int:
    j = _quantum(ns.j)
    m = _quantum(ns.m)
    if selection_check(ThreeJArgs(*j, *m)):
        raise UsageError("base quantum numbers are not admissible")
    for lam in ns.lambdas:
        for x in j + m:
            if (x.value * lam).denominator != 1:
                raise UsageError(f"lambda = {lam} makes {x} a half-integer")
    try:
        pts = scaling_study(j, m, ns.lambdas, margin=ns.margin, band=ns.caustic_band)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = [[p.lam, p.max_abs_err, p.rms_err, p.cells] for p in pts]
    rows.append(["slope", loglog_slope(pts), None, None])
    if ns.out == "json":
        rows = [[x if isinstance(x, str) else fmt(x) for x in r] for r in rows]
    sys.stdout.write(_emit_table(rows, ["lambda", "max_abs_err", "rms_err", "cells"], ns.out))
    return 0


# -- geometry -----------------------------------------------------------------


def cmd_geometry(ns) -> int:
    j = [float(x) for x in ns.j]
    m = [float(x) for x in ns.m]
    try:
        s = triangle_shape(j)
    except TriangleViolation as exc:
        raise UsageError(str(exc))
    rec = {"eta1": s.eta1, "eta2": s.eta2, "eta3": s.eta3, "area": s.area}
    try:
        region = classify_region(j, m, ns.caustic_band)
    except ValueError as exc:
        raise UsageError(str(exc))
    rec["region"] = str(region)
    try:
        o = orientation(j, m)
        rec.update(beta=o.beta, cos_gamma=o.cos_gamma)
    except DegenerateBeta:
        o = None
    if region is Region.ALLOWED:
        cfg = rotated_config(j, m, band=ns.caustic_band)
        rec.update(gamma=o.gamma, delta_z=projected_area(cfg))
        for r in range(3):
            for a, name in enumerate("xyz"):
                rec[f"J{r + 1}{name}"] = float(cfg[r, a])
    sys.stdout.write(_emit_record(rec, ns.out))
    return 0


# -- maslov -------------------------------------------------------------------


def _maslov_specs(ns, rng):
    j = np.array([float(x) for x in ns.j])
    contours = ["first", "second", "c4"] if ns.contour == "all" else [ns.contour]
    rs = [ns.r] if ns.r else [1, 2, 3]
    specs = []
    if ns.manifold == "jm":
        m = np.array([float(x) for x in ns.m]) if ns.m else 0.5 * j
        base = random_jm_base(j, m, rng)
        for kind in contours:
            if kind == "c4":
                if ns.contour == "c4":
                    raise UsageError("C4 is a Wigner-manifold contour")
                continue
            specs.extend(ContourSpec("jm", kind, base, r=r) for r in rs)
    else:
        base = random_wigner_base(j, rng)
        for kind in contours:
            if kind == "second":
                if ns.contour == "second":
                    raise UsageError("the second contours belong to the jm-torus")
                continue
            if kind == "c4":
                v = rng.normal(size=3)
                specs.append(ContourSpec("wigner", "c4", base, axis=tuple(v / np.linalg.norm(v))))
            else:
                specs.extend(ContourSpec("wigner", kind, base, r=r) for r in rs)
    return specs


def cmd_maslov(ns) -> int:
    rng = np.random.default_rng(ns.seed)
    try:
        specs = _maslov_specs(ns, rng)
    except (ValueError, TriangleViolation) as exc:
        raise UsageError(str(exc))
    rows, ok = [], True
    for spec in specs:
        data = basis_contour_data(spec)
        mu = maslov_winding(spec)
        S = contour_action(spec)
        good = mu == data.maslov and abs(S - data.action) <= 1e-9 * max(1.0, abs(data.action))
        ok &= good
        rows.append([spec.manifold, spec.kind, spec.r if spec.r else "", S, data.action,
                     mu, data.maslov, "ok" if good else "MISMATCH"])
    header = ["manifold", "contour", "r", "action", "action_analytic", "maslov",
              "maslov_analytic", "status"]
    if ns.out == "json":
        rows = [[x if isinstance(x, str) else fmt(x) for x in r] for r in rows]
    sys.stdout.write(_emit_table(rows, header, ns.out))
    return 0 if ok else 1


# -- validate -----------------------------------------------------------------


def _random_allowed(rng, jmax=50.0):
    while True:
        j = rng.uniform(1.0, jmax, size=3)
        if max(j) >= j.sum() - max(j):
            continue
        m1, m2 = rng.uniform(-j[0], j[0]), rng.uniform(-j[1], j[1])
        m = np.array([m1, m2, -m1 - m2])
        if abs(m[2]) >= j[2]:
            continue
        if classify_region(j, m) is Region.ALLOWED and abs(orientation(j, m).cos_gamma) < 0.999:
            return j, m


def validation_checks(quick: bool, seed: int):
    """Yield ``(name, passed, detail)`` for the invariant suite."""
    rng = np.random.default_rng(seed)
    top = 8 if quick else 12
    worst = Fraction(0)
    for a in range(top + 1):
        for b in range(top + 1):
            for c in range(abs(a - b), min(a + b, top) + 1, 2):
                r = orthogonality_residual(HalfInt(a), HalfInt(b), HalfInt(c))
                worst = max(worst, abs(r))
    yield "orthogonality", worst == 0, f"max |residual| = {worst}"

    n = 50 if quick else 500
    err_proj = err_act = 0.0
    for _ in range(n):
        j, m = _random_allowed(rng)
        J, _ = project(intersection_spinors(j, m))
        err_proj = max(err_proj, float(np.max(np.abs(J - rotated_config(j, m)))))
        S = action_phase(j, m)
        err_act = max(err_act, abs(action_by_arg(j, m) - S) / (1 + abs(S)))
    yield "projection", err_proj <= 1e-10, f"max deviation {err_proj:.3g}"
    yield "action", err_act <= 1e-10, f"max relative gap {err_act:.3g}"

    j, m = _random_allowed(rng, 20.0)
    v = rng.normal(size=3)
    rot = flow_action_integral(intersection_spinors(j, m), [Flow("n.J", 2 * math.pi, axis=tuple(v / np.linalg.norm(v)))])
    yield "rotational action", abs(rot) <= 1e-10, f"{rot:.3g}"

    cfg = rng.normal(size=(3, 3))
    lp = lie_poisson(lambda p: p[0, 2], lambda p: p[0, 0], cfg)
    yield "bracket {J1z,J1x}", abs(lp - cfg[0, 1]) <= 1e-6, f"{lp:.12g} vs {cfg[0, 1]:.12g}"
    J4 = -cfg.sum(axis=0)
    tet = np.vstack([cfg, J4])

    def j23sq(p):
        return float(np.sum((p[1] + p[2]) ** 2))

    def j12sq(p):
        return float(np.sum((p[0] + p[1]) ** 2))

    lp = lie_poisson(j23sq, j12sq, tet)
    tb = tetra_bracket(tet)
    yield "tetrahedron bracket", abs(lp - tb) <= 1e-8 * max(1.0, abs(tb)), f"{lp:.12g} vs {tb:.12g}"

    trials = 3 if quick else 20
    ok = True
    for _ in range(trials):
        j, m = _random_allowed(rng, 10.0)
        for kind in ("first", "second"):
            spec = ContourSpec("jm", kind, random_jm_base(j, m, rng), r=int(rng.integers(1, 4)))
            ok &= maslov_winding(spec) == basis_contour_data(spec).maslov
        w = random_wigner_base(j, rng)
        h = homotopy_consistency(w)
        ok &= h.passed and h.maslov_c4 == 6
    yield "maslov", ok, f"{trials} base points"

    args = ThreeJArgs.of((100, 110, 120), (10, -50, 40))
    a, e = asymptotic_threej(args).value, float(exact_threej(args))
    yield "asymptotic", abs(a - e) <= 0.05 * abs(e), f"{a:.6g} vs {e:.6g}"


def cmd_validate(ns) -> int:
    failed = 0
    for name, passed, detail in validation_checks(ns.quick, ns.seed):
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        failed += not passed
    return 1 if failed else 0


# -- bench --------------------------------------------------------------------


def bench(reps: int = 5) -> dict:
    args = ThreeJArgs.of((500, 480, 520), (-13, 200, -187))
    times = []
    for _ in range(reps):
        _exact_threej_twice.cache_clear()
        t = time.perf_counter()
        exact_threej(args)
        times.append(time.perf_counter() - t)
    row_times = []
    for _ in range(reps):
        t = time.perf_counter()
        threej_m_row(500, 480, 520, 10)
        row_times.append(time.perf_counter() - t)
    return {"exact_2j1000_ms": 1e3 * min(times), "row_j500_ms": 1e3 * min(row_times)}


def cmd_bench(ns) -> int:
    res = bench(ns.reps)
    rec = {
        "exact_2j1000_ms": res["exact_2j1000_ms"],
        "exact_budget_ms": 50,
        "row_j500_ms": res["row_j500_ms"],
        "row_budget_ms": 100,
    }
    sys.stdout.write(_emit_record(rec, ns.out))
    return 0


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/2" through as a value, like "-1" and "-0.5"
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semi3j", description="Exact and semiclassical 3j-symbols.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmts=("text", "json")):
        sp.add_argument("--out", choices=fmts, default=fmts[0])
        sp.add_argument("--caustic-band", type=float, default=CAUSTIC_BAND)

    sp = sub.add_parser("eval", help="exact and asymptotic value of one symbol")
    sp.add_argument("--j", nargs=3, type=_number, required=True)
    sp.add_argument("--m", nargs=3, type=_number, required=True)
    common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("scan", help="all admissible m for a triple, as CSV")
    sp.add_argument("--j", nargs=3, type=_number, required=True)
    sp.add_argument("--m1", type=_number, default=None)
    sp.add_argument("--threads", type=int, default=1)
    common(sp, ("csv", "json"))
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("scaling", help="error against scale factor lambda")
    sp.add_argument("--j", nargs=3, type=_number, required=True)
    sp.add_argument("--m", nargs=3, type=_number, default=[Fraction(0)] * 3)
    sp.add_argument("--lambdas", nargs="+", type=_number, default=[Fraction(k) for k in (1, 2, 4, 8)])
    sp.add_argument("--margin", type=int, default=3)
    common(sp, ("csv", "json"))
    sp.set_defaults(func=cmd_scaling)

    sp = sub.add_parser("geometry", help="triangle, orientation and region on contour values")
    sp.add_argument("--j", nargs=3, type=_number, required=True)
    sp.add_argument("--m", nargs=3, type=_number, default=[Fraction(0)] * 3)
    common(sp)
    sp.set_defaults(func=cmd_geometry)

    sp = sub.add_parser("maslov", help="numerical Maslov indices and actions of basis contours")
    sp.add_argument("--manifold", choices=("jm", "wigner"), default="wigner")
    sp.add_argument("--contour", choices=("first", "second", "c4", "all"), default="all")
    sp.add_argument("--r", type=int, choices=(1, 2, 3), default=None)
    sp.add_argument("--j", nargs=3, type=_number, required=True)
    sp.add_argument("--m", nargs=3, type=_number, default=None)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, ("csv", "json"))
    sp.set_defaults(func=cmd_maslov)

    sp = sub.add_parser("validate", help="run the invariant suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("bench", help="time the exact evaluator and the row recursion")
    sp.add_argument("--reps", type=int, default=5)
    sp.add_argument("--out", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if getattr(ns, "threads", 1) < 1:
            raise UsageError("--threads must be at least 1")
        return ns.func(ns)
    except UsageError as exc:
        print(f"semi3j: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
