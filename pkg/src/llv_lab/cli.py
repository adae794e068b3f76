"""Command-line interface: build fixtures, run the verification stages, and
chain them into a deterministic pipeline.

Exit codes: 0 success (or certified), 1 I/O and schema errors, 2
mathematical verification failures (the report is still written).
Identical inputs and seeds produce byte-identical reports; wall-clock
timings are only added under --timings since they would break that
contract.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .builders import (build_augmented_model, build_k3,
                       build_verbitsky_component, default_form,
                       parse_form_name, QuadraticFormSpec)
from .decomposition import markman_decompose
from .errors import LlvLabError
from .finiteness import certify, commutant_constraint_space
from .hodge import (PeriodPoint, check_pi2_faithful, find_periods,
                    hodge_numbers, verify_weil_membership)
from .llv import analyze_llv
from .rep import SoHAction, isotypic_decompose
from .ring import validate
from .serialize import dumps_algebra, load_algebra, save_algebra
from .sl2 import find_omega_auto


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LLV_LAB_THREADS", "1")))
    except ValueError:
        return 1


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _render_lines(obj, indent=0, out=None):
    pad = "  " * indent
    for key in sorted(obj) if isinstance(obj, dict) else []:
        val = obj[key]
        if isinstance(val, dict):
            out.append(f"{pad}{key}:")
            _render_lines(val, indent + 1, out)
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            out.append(f"{pad}{key}:")
            for entry in val:
                out.append(f"{pad}  -")
                _render_lines(entry, indent + 2, out)
        else:
            out.append(f"{pad}{key}: {json.dumps(val, sort_keys=True)}")


def render_text(report: dict) -> str:
    lines = []
    llv = report.get("stages", {}).get("llv") or (
        report if "dim_found" in report else None)
    if llv and llv.get("iso_verified") and llv.get("grading_dims"):
        b2 = llv["grading_dims"][0]
        lines.append(f"dim g_tot = {llv['dim_found']} = dim so({b2 + 2})")
    _render_lines(report, 0, lines)
    return "\n".join(lines) + "\n"


def report_render(report: dict, fmt: str) -> str:
    """Deterministic rendering: canonical JSON or a keyed text layout."""
    return render_json(report) if fmt == "json" else render_text(report)


def _emit(report: dict, fmt: str, out_path: str | None) -> None:
    text = report_render(report, fmt)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_rational_csv(text: str):
    return [Fraction(part.strip()) for part in text.split(",")]


def _resolve_form(args) -> QuadraticFormSpec:
    if getattr(args, "form", None):
        if os.path.exists(args.form):
            with open(args.form, encoding="utf-8") as fh:
                rows = json.load(fh)
            spec = QuadraticFormSpec.coerce(
                [[Fraction(str(x)) for x in row] for row in rows])
        else:
            spec = parse_form_name(args.form)
        if getattr(args, "b2", None) and spec.rank != args.b2:
            raise LlvLabError(
                f"--b2 {args.b2} disagrees with the form rank {spec.rank}")
        return spec
    if getattr(args, "b2", None):
        return default_form(args.b2)
    raise LlvLabError("supply --b2 or --form")


def _build_algebra(kind: str, args):
    spec = _resolve_form(args)
    if kind == "k3":
        return build_k3(spec)
    if kind == "sh":
        return build_verbitsky_component(spec, args.n, seed=args.seed)
    if kind == "augmented":
        return build_augmented_model(spec, args.n, args.t, seed=args.seed)
    raise LlvLabError(f"unknown builder kind {kind!r}")


def _load(path: str):
    alg = load_algebra(path)
    return alg


def _input_hash(alg) -> str:
    return hashlib.sha256(dumps_algebra(alg).encode()).hexdigest()


def _omega_for(alg, spec: str):
    if spec == "auto":
        return find_omega_auto(alg)
    return alg.element(2, _parse_rational_csv(spec))


def _periods_for(alg, args):
    periods = []
    for pair in args.period or []:
        kv = dict(part.split("=", 1) for part in pair)
        periods.append(PeriodPoint.make(_parse_rational_csv(kv["e1"]),
                                        _parse_rational_csv(kv["e2"])))
    if not periods:
        periods = find_periods(alg, args.auto_periods, seed=args.seed)
    return periods


# ---------------------------------------------------------------------------
# stage runners


def stage_llv(alg, seed):
    analysis = analyze_llv(alg, seed=seed)
    report = analysis.report.to_json_dict()
    report["lambda_span_dim"] = analysis.lambda_span_dim
    report["lambda_span_equals_gminus2"] = analysis.lambda_span_equals_gminus2
    return analysis, report


def stage_markman(alg, analysis):
    mk = markman_decompose(alg, analysis.g)
    return mk, mk.to_json_dict()


def stage_isotypic(alg, analysis, mk):
    act = SoHAction(alg, analysis.soh.subalgebra)
    out = {}
    ok = True
    for i in sorted(mk.c_parts):
        part = mk.c_parts[i]
        if part.dim_at(2 * i) == 0:
            continue
        rep = isotypic_decompose(alg, act, part)
        out[str(2 * i)] = rep.to_json_dict()
        if not (rep.resolved and rep.semisimple_ok and rep.schur_ok):
            ok = False
    return act, {"c_parts": out, "all_resolved": ok}


def stage_hodge(alg, act, periods):
    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            datas = list(pool.map(
                lambda p: verify_weil_membership(alg, act, p), periods))
    else:
        datas = [verify_weil_membership(alg, act, p) for p in periods]
    pi2 = check_pi2_faithful(alg, act, datas)
    per_period = []
    for wd in datas:
        entry = wd.to_json_dict()
        entry["hodge_numbers"] = {
            str(d): [[p, q, h] for p, q, h in hodge_numbers(wd, d)]
            for d in sorted(wd.eigen_table)}
        per_period.append(entry)
    ok = pi2.ok and all(wd.ok for wd in datas)
    return datas, {"periods": per_period, "pi2": pi2.to_json_dict(), "ok": ok}


def stage_certify(alg, analysis, omega, mk):
    cert = certify(alg, analysis.g, omega, markman=mk)
    return cert, cert.to_json_dict()


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    alg = _build_algebra(args.kind, args)
    if args.output:
        save_algebra(alg, args.output)
    else:
        sys.stdout.write(dumps_algebra(alg))
    return 0


def cmd_llv(args) -> int:
    alg = _load(args.algebra)
    analysis, report = stage_llv(alg, args.seed)
    _emit(report, args.format, args.report)
    return 0 if analysis.report.iso_verified else 2


def cmd_markman(args) -> int:
    alg = _load(args.algebra)
    analysis, _ = stage_llv(alg, args.seed)
    mk, report = stage_markman(alg, analysis)
    _emit(report, args.format, args.report)
    return 0 if mk.ok else 2


def cmd_isotypic(args) -> int:
    alg = _load(args.algebra)
    analysis, _ = stage_llv(alg, args.seed)
    mk, _ = stage_markman(alg, analysis)
    _, report = stage_isotypic(alg, analysis, mk)
    _emit(report, args.format, args.report)
    return 0 if report["all_resolved"] else 2


def cmd_hodge(args) -> int:
    alg = _load(args.algebra)
    analysis, _ = stage_llv(alg, args.seed)
    act = SoHAction(alg, analysis.soh.subalgebra)
    periods = _periods_for(alg, args)
    _, report = stage_hodge(alg, act, periods)
    _emit(report, args.format, args.report)
    return 0 if report["ok"] else 2


def cmd_certify(args) -> int:
    alg = _load(args.algebra)
    analysis, _ = stage_llv(alg, args.seed)
    omega = _omega_for(alg, args.omega)
    mk, _ = stage_markman(alg, analysis)
    cert, report = stage_certify(alg, analysis, omega, mk)
    _emit(report, args.format, args.output)
    return 0 if cert.certified else 2


def cmd_pipeline(args) -> int:
    if args.build:
        alg = _build_algebra(args.build, args)
    elif args.algebra:
        alg = _load(args.algebra)
    else:
        raise LlvLabError("pipeline needs an algebra file or --build")

    stages: dict = {}
    order = []
    times = {}
    failed_math = False

    def run(name, fn):
        nonlocal failed_math
        t0 = time.monotonic()
        result, report = fn()
        times[name] = round((time.monotonic() - t0) * 1000.0, 3)
        stages[name] = report
        order.append(name)
        return result

    vrep = validate(alg)
    stages["validate"] = vrep.to_json_dict()
    order.append("validate")
    out = {"tool": "llv-lab", "version": __version__, "seed": args.seed,
           "threads": _threads(), "input_hash": _input_hash(alg),
           "stages": stages, "stage_order": order}
    if not vrep.ok:
        out["status"] = "invalid-algebra"
        _emit(out, args.format, args.report)
        return 2

    analysis = run("llv", lambda: stage_llv(alg, args.seed))
    structural_ok = analysis.report.iso_verified
    mk = None
    if structural_ok:
        mk = run("markman", lambda: stage_markman(alg, analysis))
        act = run("isotypic", lambda: stage_isotypic(alg, analysis, mk))
        periods = _periods_for(alg, args)
        run("hodge", lambda: stage_hodge(alg, act, periods))
        omega = _omega_for(alg, args.omega)
        cert = run("certify", lambda: stage_certify(alg, analysis, omega, mk))
        failed_math = (not mk.ok or not cert.certified
                       or not stages["hodge"]["ok"]
                       or not stages["isotypic"]["all_resolved"])
        out["status"] = "failed" if failed_math else "ok"
    else:
        out["status"] = "structure-violation"
        failed_math = True
    if args.timings:
        out["wall_times_ms"] = times
    _emit(out, args.format, args.report)
    return 2 if failed_math else 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="llv-lab",
        description="Exact-arithmetic lab for LLV Lie algebras of graded "
                    "Frobenius algebras")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, report_flag="--report"):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument(report_flag, "-o", dest="report", default=None,
                       help="write the report to this path instead of stdout")

    b = sub.add_parser("build", help="construct a fixture algebra")
    b.add_argument("kind", choices=("k3", "sh", "augmented"))
    b.add_argument("--b2", type=int, default=None)
    b.add_argument("--form", default=None,
                   help="named form (U^3+E8(-1)^2, U+diag(1,1,1), ...) or a "
                        "JSON matrix file")
    b.add_argument("--n", type=int, default=2, help="half complex dimension")
    b.add_argument("--t", type=int, default=0, help="extra middle classes")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(fn=cmd_build)

    l = sub.add_parser("llv", help="closure + structure theorem report")
    l.add_argument("algebra")
    common(l)
    l.set_defaults(fn=cmd_llv)

    m = sub.add_parser("markman", help="complement decomposition report")
    m.add_argument("algebra")
    common(m)
    m.set_defaults(fn=cmd_markman)

    i = sub.add_parser("isotypic", help="isotypic reports for the C parts")
    i.add_argument("algebra")
    common(i)
    i.set_defaults(fn=cmd_isotypic)

    h = sub.add_parser("hodge", help="Weil operators and Hodge numbers")
    h.add_argument("algebra")
    h.add_argument("--period", nargs=2, action="append", metavar=("E1", "E2"),
                   help="period point, e.g. --period e1=1,0,0 e2=0,1,0")
    h.add_argument("--auto-periods", type=int, default=3)
    common(h)
    h.set_defaults(fn=cmd_hodge)

    c = sub.add_parser("certify", help="finiteness certificate")
    c.add_argument("algebra")
    c.add_argument("--omega", default="auto",
                   help="degree-2 class as rational csv, or 'auto'")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--format", choices=("json", "text"), default="json")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(fn=cmd_certify)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    p.add_argument("algebra", nargs="?", default=None)
    p.add_argument("--build", choices=("k3", "sh", "augmented"), default=None)
    p.add_argument("--b2", type=int, default=None)
    p.add_argument("--form", default=None)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--omega", default="auto")
    p.add_argument("--period", nargs=2, action="append", metavar=("E1", "E2"))
    p.add_argument("--auto-periods", type=int, default=3)
    p.add_argument("--timings", action="store_true",
                   help="include wall times (breaks byte-determinism)")
    common(p)
    p.set_defaults(fn=cmd_pipeline)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except LlvLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
