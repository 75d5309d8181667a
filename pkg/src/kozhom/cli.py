"""Command line: ``kozhom verify|hilbert|support|complexity|classify <job.json>``
and ``kozhom reproduce <name>``.

Exit status 0 means the computation ran and every check passed, 1 a
mathematical failure (axioms or catalog expectations), 2 a usage or input
error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .jobs import JobError, load_job
from .runner import AxiomFailure, axiom_reports, ci_verdict, hilbert, support
from .support import complexity

OK, MATH_FAILURE, USAGE = 0, 1, 2


def _emit(args, text: str, obj) -> None:
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_verify(args) -> int:
    job = load_job(args.job)
    _, _, reports = axiom_reports(job)
    lines, obj = [], {}
    for who, rep in reports:
        lines.append(f"{who}:")
        lines.extend(f"  {c}" for c in rep.checks)
        obj[who] = {c.name: {"passed": c.passed, "degree": c.degree, "detail": str(c)} for c in rep.checks}
    ok = all(r.ok for _, r in reports)
    lines.append("verdict: " + ("all axioms hold" if ok else "axioms fail"))
    obj["ok"] = ok
    _emit(args, "\n".join(lines), obj)
    return OK if ok else MATH_FAILURE


def cmd_hilbert(args) -> int:
    h = hilbert(load_job(args.job), args.dmax, args.grading)
    rows = sorted(h.dims.items())
    text = "\n".join(["d\tdim"] + [f"{d}\t{v}" for d, v in rows])
    _emit(args, text, {"grading": h.grading, "dims": [[d, v] for d, v in rows]})
    return OK


def _support_text(rep, hc):
    if rep.is_empty:
        head = f"support: {rep.summary()}; verdict: support empty"
    else:
        head = f"support: {rep.summary()}"
    lines = [head, f"classification: {hc}"]
    if rep.annihilator is not None:
        a = rep.annihilator
        lines.append(f"annihilator (degree <= {a.degree_bound}, d <= {a.dmax}): {a}")
    return lines


def cmd_support(args) -> int:
    rep, hc = support(load_job(args.job), args.q, args.dmax, args.deg_bound, args.grading)
    obj = {
        "points": [list(p.coords) for p in rep.points],
        "total_points": rep.total_points,
        "empty": rep.is_empty,
        "full": rep.is_full,
        "classification": str(hc),
        "annihilator": None if rep.annihilator is None else str(rep.annihilator),
    }
    _emit(args, "\n".join(_support_text(rep, hc)), obj)
    return OK


def cmd_complexity(args) -> int:
    h = hilbert(load_job(args.job), args.dmax, args.grading)
    cx = complexity(h)
    obj = {"complexity": cx.value, "confidence": cx.confidence, "tail_start": cx.tail_start, "dmax": h.dmax}
    _emit(args, f"complexity: {cx} from degrees {cx.tail_start}..{h.dmax}", obj)
    return OK


def cmd_classify(args) -> int:
    job = load_job(args.job)
    rep, hc = support(job, args.q, args.dmax, args.deg_bound, args.grading)
    lines = _support_text(rep, hc)
    obj = {"classification": str(hc), "points": [list(p.coords) for p in rep.points]}
    verdict = ci_verdict(job, args.q, args.dmax)
    if verdict is not None:
        lines.append(f"complete intersection: {verdict}")
        obj["complete_intersection"] = verdict.is_ci
    _emit(args, "\n".join(lines), obj)
    return OK


def cmd_reproduce(args) -> int:
    try:
        outcomes = catalog.reproduce(args.job)
    except KeyError as e:
        print(e.args[0], file=sys.stderr)
        return USAGE
    ok = all(o.passed for o in outcomes)
    passed = sum(o.passed for o in outcomes)
    text = "\n".join([str(o) for o in outcomes] + [f"{args.job}: {passed}/{len(outcomes)} PASS"])
    obj = {"entry": args.job, "ok": ok,
           "checks": [{"label": o.label, "passed": o.passed, "detail": o.detail} for o in outcomes]}
    _emit(args, text, obj)
    return OK if ok else MATH_FAILURE


COMMANDS = {
    "verify": cmd_verify,
    "hilbert": cmd_hilbert,
    "support": cmd_support,
    "complexity": cmd_complexity,
    "reproduce": cmd_reproduce,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kozhom", description="Exact cohomological supports over Koszul complexes.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "reproduce":
            sp.add_argument("job", metavar="name", help="catalog entry: " + ", ".join(catalog.names()))
        else:
            sp.add_argument("job", help="job file (JSON)")
        sp.add_argument("--dmax", type=int, help="top cohomological degree")
        sp.add_argument("--q", type=int, help="field for rational points (must equal the characteristic)")
        sp.add_argument("--deg-bound", type=int, help="degree bound for the annihilator")
        sp.add_argument("--grading", choices=("ext", "internal"), help="grading of the Hilbert function")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except AxiomFailure as e:
        print(f"error: data fails the DG axioms: {e}", file=sys.stderr)
        return MATH_FAILURE
    except (JobError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
