"""prior-forge command line: plan, check, sweep, calc, oracle.

Exit codes: 0 accepted or clean, 1 sound rejection, 2 input or I/O error.
"""

from __future__ import annotations

import argparse
import functools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import oracle
from .chern import ChernData, euler_char
from .document import DocumentError, PlanDocument
from .errors import C2BelowThreshold, ChecklistFailed, DivisorSumMismatch, PriorForgeError
from .lattice import DivisorClass, curve_h0_interval, h0_upper, intersect, make_surface
from .planners import TAGS, PlanRequest, plan, verify_plan

EXIT_OK, EXIT_REJECTED, EXIT_INPUT = 0, 1, 2

_NEGATIVE_VALUE = re.compile(r"^-\d")


def preprocess_argv(argv: list[str]) -> list[str]:
    """Glue negative values onto their flag: ["--c1", "-1,-4"] -> ["--c1=-1,-4"]."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and _NEGATIVE_VALUE.match(argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def pair(text: str) -> DivisorClass:
    try:
        a, b = text.split(",")
        return DivisorClass(int(a), int(b))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer pair A,B, got {text!r}") from None


def int_range(text: str) -> range:
    """'A..B' (inclusive, empty when B < A) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _err(msg: str) -> None:
    print(f"prior-forge: error: {msg}", file=sys.stderr)


# -- plan / check -----------------------------------------------------------------


def _render(doc: PlanDocument, fmt: str) -> str:
    return doc.to_json() if fmt == "json" else doc.to_text()


def cmd_plan(args) -> int:
    req = PlanRequest(args.genus, args.e, args.rank, args.c1.a, args.c1.b, args.c2, args.theorem)
    try:
        p = plan(req)
        code, doc = EXIT_OK, PlanDocument(p, accepted=True)
    except ChecklistFailed as exc:
        code, doc = EXIT_REJECTED, PlanDocument(exc.plan, accepted=False)
        _err(str(exc))
    except DivisorSumMismatch as exc:
        _err(f"DivisorSumMismatch: {exc}")
        return EXIT_REJECTED
    except C2BelowThreshold as exc:
        _err(f"C2BelowThreshold: {exc}")
        print(f"threshold: {'>' if exc.strict else '>='} {exc.threshold}", file=sys.stderr)
        return EXIT_INPUT
    except PriorForgeError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    try:
        _write(_render(doc, args.format), args.out)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    return code


def check_document(doc: PlanDocument) -> list[dict]:
    p = doc.plan
    findings = [f.to_dict() for f in verify_plan(p)]
    findings += oracle.cross_check_plan(p.request.surface, p)
    if doc.accepted != (not p.failed):
        findings.append({"kind": "StatusMismatch",
                         "detail": f"document says accepted={doc.accepted}, checklist failures {p.failed}"})
    return findings


def cmd_check(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = PlanDocument.from_json(fh.read())
    except (OSError, DocumentError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    try:
        findings = check_document(doc)
    except PriorForgeError as exc:
        findings = [{"kind": type(exc).__name__, "detail": str(exc)}]
    report = {"accepted": doc.accepted, "clean": not findings, "findings": findings, "theorem": doc.plan.theorem}
    if args.format == "json":
        text = _dump(report)
    else:
        lines = [f"{doc.plan.theorem}: {'clean' if not findings else f'{len(findings)} finding(s)'}"]
        lines += [f"  {f['kind']}: {f['detail']}" for f in findings]
        text = "\n".join(lines) + "\n"
    try:
        _write(text, args.out)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    return EXIT_OK if not findings else EXIT_REJECTED


# -- sweep ---------------------------------------------------------------------------


def sweep_row(point: tuple) -> dict:
    g, e, r, s, t, c2, theorem = point
    row = {"g": g, "e": e, "rank": r, "s": s, "t": t, "c2": c2}
    try:
        p = plan(PlanRequest(g, e, r, s, t, c2, theorem))
        row.update(status="accepted", theorem=p.theorem, h0_lower=p.h0_lower, reason=None,
                   flags=list(p.flags))
    except ChecklistFailed as exc:
        row.update(status="rejected", theorem=exc.plan.theorem, h0_lower=None,
                   reason="ChecklistFailed", detail=str(exc))
    except PriorForgeError as exc:
        row.update(status="rejected", theorem=None, h0_lower=None, reason=type(exc).__name__, detail=str(exc))
    return row


def sweep_workers() -> int:
    cap = os.environ.get("PRIOR_FORGE_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def run_sweep(points: list[tuple], workers: int) -> list[dict]:
    """Rows in grid order regardless of worker count."""
    if workers <= 1 or len(points) < 32:
        return [sweep_row(p) for p in points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sweep_row, points, chunksize=max(1, len(points) // (4 * workers))))


def sweep_report(rows: list[dict]) -> dict:
    reasons: dict[str, int] = {}
    for row in rows:
        if row["status"] == "rejected":
            reasons[row["reason"]] = reasons.get(row["reason"], 0) + 1
    accepted = sum(1 for row in rows if row["status"] == "accepted")
    return {
        "schema_version": "1",
        "rows": rows,
        "counts": {"total": len(rows), "accepted": accepted, "rejected": len(rows) - accepted,
                   "by_reason": reasons},
    }


def cmd_sweep(args) -> int:
    points = [
        (g, e, r, s, t, c2, args.theorem)
        for g in args.genus
        for e in args.e
        for r in args.rank
        for s in args.s
        for t in args.t
        for c2 in args.c2
    ]
    report = sweep_report(run_sweep(points, sweep_workers()))
    if args.format == "json":
        text = _dump(report)
    else:
        lines = []
        for row in report["rows"]:
            tail = f"h0_lower={row['h0_lower']}" if row["status"] == "accepted" else row["reason"]
            lines.append(f"g={row['g']} e={row['e']} r={row['rank']} c1=({row['s']},{row['t']}) "
                         f"c2={row['c2']}  {row['status']}  {tail}")
        c = report["counts"]
        lines.append(f"total {c['total']}, accepted {c['accepted']}, rejected {c['rejected']}")
        text = "\n".join(lines) + "\n"
    try:
        _write(text, args.out)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    return EXIT_OK


# -- calc / oracle ---------------------------------------------------------------------


def cmd_calc(args) -> int:
    try:
        S = make_surface(args.genus, args.e)
        if args.what == "intersect":
            value = intersect(S, args.d1, args.d2)
        elif args.what == "chi":
            value = euler_char(S, ChernData(args.rank, args.c1, args.c2))
        elif args.what == "canonical":
            value = S.K.to_list()
        elif args.what == "h0upper":
            value = h0_upper(S, args.d)
        else:
            value = list(curve_h0_interval(args.genus, args.deg))
    except PriorForgeError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps({"value": value}, sort_keys=True))
    elif isinstance(value, list):
        print("(" + ",".join(str(v) for v in value) + ")")
    else:
        print(value)
    return EXIT_OK


def cmd_oracle(args) -> int:
    report = oracle.closed_form_suite()
    if args.format == "json":
        text = _dump(report.to_dict())
    else:
        lines = [f"{r.name}: {r.points} points, {len(r.mismatches)} mismatches" for r in report.identities]
        lines.append(f"total mismatches: {report.mismatch_count}")
        text = "\n".join(lines) + "\n"
    try:
        _write(text, args.out)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    return EXIT_OK if report.mismatch_count == 0 else EXIT_REJECTED


# -- parser ------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, out: bool = True, fmt: str = "json") -> None:
    p.add_argument("--format", choices=("json", "text"), default=fmt)
    if out:
        p.add_argument("--out", default=None, help="write to FILE instead of standard output")


@functools.lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prior-forge",
                                 description="Construction plans for simple prioritary bundles on ruled surfaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan one instance")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--c1", type=pair, required=True, help="S,T for c1 = S*C0 + T*f")
    p.add_argument("--c2", type=int, required=True)
    p.add_argument("--theorem", choices=TAGS, default=None)
    _common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("check", help="verify a plan document")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="plan every point of a grid")
    p.add_argument("--genus", type=int_range, required=True)
    p.add_argument("--e", type=int_range, required=True)
    p.add_argument("--rank", type=int_range, required=True)
    p.add_argument("--s", type=int_range, default=range(0, 1))
    p.add_argument("--t", type=int_range, required=True)
    p.add_argument("--c2", type=int_range, required=True)
    p.add_argument("--theorem", choices=TAGS, default=None)
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calc", help="desk calculator for the lattice and Riemann-Roch")
    calc = p.add_subparsers(dest="what", required=True)
    c = calc.add_parser("intersect")
    c.add_argument("--genus", type=int, default=0)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--d1", type=pair, required=True)
    c.add_argument("--d2", type=pair, required=True)
    c = calc.add_parser("chi")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--c1", type=pair, required=True)
    c.add_argument("--c2", type=int, required=True)
    c = calc.add_parser("canonical")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c = calc.add_parser("h0upper")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--d", type=pair, required=True)
    c = calc.add_parser("curveh0", help="h0 interval of a degree-deg line bundle on the base curve")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--e", type=int, default=0)
    c.add_argument("--deg", type=int, required=True)
    for c in calc.choices.values():
        _common(c, out=False, fmt="text")
    p.set_defaults(func=cmd_calc)

    p = sub.add_parser("oracle", help="grid-check the closed-form identities")
    _common(p)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = preprocess_argv(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
