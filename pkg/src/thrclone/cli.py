"""Command-line interface: ``thrclone <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .asummability import DEFAULT_MAX_MULTISETS, equal_sums_witness
from .boolfn import essential_variables, is_monotone, is_self_dual, parse_fn
from .clones import INF, as_clone, catalogue, characterizing_constraints, is_member, membership_crosscheck
from .constraints import (
    DEFAULT_COLUMN_BUDGET,
    RelationalConstraint,
    make_B,
    minimal_forbidden_minors,
    pol_enumerate,
    preserves_all,
    violation_witness,
)
from .constructions import ConstructionTag, construct, membership_report
from .exceptions import DomainError, ThrCloneError
from .reports import SCHEMA, SUITES, Budgets, emit_report, run_suite, tz_report
from .threshold import classify_intersection, is_minimally_non_threshold, is_threshold, is_unate


def _constraints(args) -> list[RelationalConstraint]:
    qs = [RelationalConstraint.parse(text) for text in args.constraint or ()]
    qs.extend(make_B(ell) for ell in args.B or ())
    if not qs:
        raise DomainError("give at least one --constraint R|S or --B l")
    return qs


def _budgets(args) -> Budgets:
    return Budgets(args.budget_multisets, args.budget_columns, args.seed)


def cmd_analyze(args) -> tuple[dict, bool]:
    f = parse_fn(args.fn)
    b = _budgets(args)
    cert = is_threshold(f) if f.arity <= 20 else None
    out = {
        "fn": str(f),
        "arity": f.arity,
        "true_points": f.n_true,
        "essential": sorted(essential_variables(f)),
        "monotone": is_monotone(f),
        "self_dual": is_self_dual(f),
        "unate": is_unate(f),
        "threshold": cert.to_json() if cert else {"threshold": False},
        "clones": [str(c) for c in catalogue() if is_member(f, c)],
    }
    pres = {}
    for ell in args.ell:
        w = equal_sums_witness(f, ell, b.multisets)
        pres[f"B{ell}"] = w is None
    out["preserves"] = pres
    return out, True


def cmd_preserves(args) -> tuple[dict, bool]:
    f = parse_fn(args.fn)
    results = []
    for q in _constraints(args):
        v = violation_witness(f, q, args.budget_columns)
        results.append({
            "constraint": str(q),
            "preserves": v is None,
            "violation": v.to_json() if v else None,
        })
    return {"fn": str(f), "results": results}, True


def cmd_asummable(args) -> tuple[dict, bool]:
    f = parse_fn(args.fn)
    ells = range(2, args.k + 1) if args.k else args.ell
    results = []
    for ell in ells:
        w = equal_sums_witness(f, ell, args.budget_multisets)
        results.append({"ell": ell, "preserves": w is None, "witness": w.to_json() if w else None})
    return {"fn": str(f), "results": results, "asummable": all(r["preserves"] for r in results)}, True


def cmd_threshold(args) -> tuple[dict, bool]:
    f = parse_fn(args.fn)
    cert = is_threshold(f)
    out = cert.to_json() if cert else {"threshold": False}
    if not args.certificate and cert:
        out = {"threshold": True}
    out["fn"] = str(f)
    if args.minimal:
        out["minimally_non_threshold"] = is_minimally_non_threshold(f)
    return out, True


def cmd_clone(args) -> tuple[dict, bool]:
    c = as_clone(args.clone)
    out = {"clone": str(c), "display": c.display}
    if args.fn:
        f = parse_fn(args.fn)
        out["fn"] = str(f)
        out["member"] = (
            membership_crosscheck(f, c, args.rank_bound, args.budget_columns) if args.crosscheck else is_member(f, c)
        )
    char = characterizing_constraints(c, args.rank_bound)
    out["constraints"] = [str(q) for q in char.constraints]
    out["truncated"] = char.truncated
    return out, True


def cmd_construct(args) -> tuple[dict, bool]:
    f = parse_fn(args.fn)
    g = construct(f, args.tag)
    report = membership_report(g, args.tag)
    return {"fn": str(f), "tag": args.tag, "constructed": str(g), "arity": g.arity, "membership": report}, report["member"]


def cmd_tz(args) -> tuple[dict, bool]:
    report = tz_report(args.k, args.check, _budgets(args))
    return report.to_json(args.timings), report.passed


def cmd_classify(args) -> tuple[dict, bool]:
    clones = catalogue((2, 3, INF)) if args.all else [as_clone(args.clone)]
    verdicts = [classify_intersection(c).to_json() for c in clones]
    return {"verdicts": verdicts}, True


def cmd_pol(args) -> tuple[dict, bool]:
    found = pol_enumerate(_constraints(args), args.max_arity, args.budget_columns)
    return {
        "counts": {str(n): len(fs) for n, fs in found.items()},
        "functions": {str(n): [str(f) for f in fs] for n, fs in found.items()} if args.list else None,
    }, True


def cmd_forbidden(args) -> tuple[dict, bool]:
    qs = _constraints(args)
    found = minimal_forbidden_minors(lambda f: preserves_all(f, qs, args.budget_columns), args.max_arity)
    return {"constraints": [str(q) for q in qs], "minimal_forbidden_minors": [str(f) for f in found]}, True


def _fn_arg(p):
    p.add_argument("--fn", required=True, help="truth table as <arity>:<hex>")


def _constraint_args(p):
    p.add_argument("--constraint", action="append", help="relational constraint R|S")
    p.add_argument("--B", type=int, action="append", metavar="L", help="the B_l constraint")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-multisets", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget-columns", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="thrclone", description="Threshold functions, clones and B_l constraints.")
    parser.add_argument("--budget-multisets", type=int, default=DEFAULT_MAX_MULTISETS)
    parser.add_argument("--budget-columns", type=int, default=DEFAULT_COLUMN_BUDGET)
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("analyze", cmd_analyze, "summary of a function")
    _fn_arg(p)
    p.add_argument("--ell", type=int, nargs="*", default=[2, 3])

    p = add("preserves", cmd_preserves, "raw preservation of constraints")
    _fn_arg(p)
    _constraint_args(p)

    p = add("asummable", cmd_asummable, "equal-sums witnesses")
    _fn_arg(p)
    p.add_argument("--ell", type=int, nargs="*", default=[2])
    p.add_argument("--k", type=int, help="check every l in 2..k")

    p = add("threshold", cmd_threshold, "exact thresholdness")
    _fn_arg(p)
    p.add_argument("--certificate", action="store_true")
    p.add_argument("--minimal", action="store_true")

    p = add("clone", cmd_clone, "clone membership and characterizing constraints")
    p.add_argument("--clone", required=True)
    p.add_argument("--fn")
    p.add_argument("--rank-bound", type=int, default=4)
    p.add_argument("--crosscheck", action="store_true")

    p = add("construct", cmd_construct, "build g_s, g_mc, ... of a function")
    _fn_arg(p)
    p.add_argument("--tag", required=True, choices=[t.value for t in ConstructionTag])

    p = add("tz", cmd_tz, "checks on the magic-square function f_k")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--check", default="all", help="all, rowcol, monotone or B=<l>")
    p.add_argument("--timings", action="store_true")

    p = add("classify", cmd_classify, "is C meet thr finitely characterizable")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--clone")
    group.add_argument("--all", action="store_true")

    p = add("pol", cmd_pol, "enumerate polymorphisms of small arity")
    _constraint_args(p)
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--list", action="store_true")

    p = add("forbidden-minors", cmd_forbidden, "minimal forbidden minors of Pol of constraints")
    _constraint_args(p)
    p.add_argument("--max-arity", type=int, default=2)

    p = add("suite", None, "run verification suites")
    p.add_argument("name", choices=SUITES + ("all",))
    p.add_argument("--timings", action="store_true")
    return parser


def _render_text(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if key == "schema":
            continue
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _run_suites(args) -> int:
    names = SUITES if args.name == "all" else (args.name,)
    ok = True
    for name in names:
        report = run_suite(name, _budgets(args))
        sys.stdout.buffer.write(emit_report(report, args.format, args.timings))
        ok &= report.passed
    sys.stdout.flush()
    return 0 if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "suite":
            return _run_suites(args)
        payload, ok = args.func(args)
    except ThrCloneError as exc:
        payload, ok = {"error": type(exc).__name__, "message": str(exc)}, False
        code = 2
    else:
        code = 0 if ok else 1
    payload = {"schema": SCHEMA, "command": args.command, "pass": ok, **payload}
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_render_text(payload))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
