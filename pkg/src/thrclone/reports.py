"""Verification suites reproducing the desk-scale claims, and report output.

Every check returns a verdict and a JSON-able witness payload.  A check that
runs out of budget is recorded as ``skipped``; so is a check that is declared
out of scope up front.  Only the former costs the overall verdict.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .asummability import DEFAULT_MAX_MULTISETS, equal_sums_witness, preserves_B_fast
from .boolfn import (
    XNOR2,
    XOR2,
    BoolFn,
    all_functions,
    all_points,
    canonical_form,
    essential_variables,
    identification_minors,
    is_monotone,
    minor,
)
from .clones import INF, CloneId, catalogue, is_member
from .constraints import DEFAULT_COLUMN_BUDGET, make_B, minimal_forbidden_minors, preserves
from .constructions import ConstructionTag, construct, membership_report, transport_witness_up
from .exceptions import DomainError, ResourceError
from .threshold import (
    FINITE,
    classify_intersection,
    is_minimally_non_threshold,
    is_threshold,
    verify_certificate,
    witness_clone,
)
from .tz import (
    a_matrix,
    build_tz,
    dot_classification,
    full_matrix,
    line_indices,
    periodic_witness,
    phi,
    row_col_subsets,
    tz_check_B,
    verify_row_col_lemma,
)

SCHEMA = 1
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
SUITES = ("paper-core", "tz", "constructions", "classification")


@dataclass(frozen=True)
class Budgets:
    multisets: int = DEFAULT_MAX_MULTISETS
    columns: int = DEFAULT_COLUMN_BUDGET
    seed: int = 0


@dataclass
class CheckRecord:
    claim: str
    anchor: str
    verdict: str
    witness: object = None
    elapsed: float = 0.0
    planned_skip: bool = False

    def to_json(self, timings: bool = False) -> dict:
        out = {"claim": self.claim, "anchor": self.anchor, "verdict": self.verdict, "witness": self.witness}
        if self.planned_skip:
            out["out_of_scope"] = True
        if timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out


@dataclass
class VerificationReport:
    suite: str
    budgets: Budgets
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.verdict == PASS or (r.verdict == SKIPPED and r.planned_skip) for r in self.records)

    def record(self, claim: str) -> CheckRecord:
        return next(r for r in self.records if r.claim == claim)

    def to_json(self, timings: bool = False) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "seed": self.budgets.seed,
            "budgets": {"multisets": self.budgets.multisets, "columns": self.budgets.columns},
            "pass": self.passed,
            "records": [r.to_json(timings) for r in self.records],
        }


def emit_report(report: VerificationReport, fmt: str = "json", timings: bool = False) -> bytes:
    """Serialize a report; without ``timings`` the output is deterministic."""
    if fmt == "json":
        return (json.dumps(report.to_json(timings), indent=2, sort_keys=True) + "\n").encode()
    if fmt == "text":
        lines = [f"suite {report.suite} (seed {report.budgets.seed})"]
        for r in report.records:
            tail = f"  [{r.elapsed:.2f}s]" if timings else ""
            note = " (out of scope)" if r.planned_skip else ""
            lines.append(f"{r.verdict.upper():8}{r.claim}: {r.anchor}{note}{tail}")
        lines.append("PASS" if report.passed else "FAIL")
        return ("\n".join(lines) + "\n").encode()
    raise DomainError(f"unknown format {fmt!r}")


Check = Callable[[Budgets], tuple[bool, object]]


def _run(report: VerificationReport, claim: str, anchor: str, check: Check) -> CheckRecord:
    start = time.perf_counter()
    try:
        ok, witness = check(report.budgets)
        verdict = PASS if ok else FAIL
    except ResourceError as exc:
        verdict, witness = SKIPPED, {"reason": str(exc)}
    rec = CheckRecord(claim, anchor, verdict, witness, time.perf_counter() - start)
    report.records.append(rec)
    return rec


def _skip(report: VerificationReport, claim: str, anchor: str, reason: str) -> None:
    report.records.append(CheckRecord(claim, anchor, SKIPPED, {"reason": reason}, 0.0, True))


def _functions_upto(n: int):
    for k in range(1, n + 1):
        yield from all_functions(k)


# independent oracles


def integer_threshold_tables(n: int, wmax: int = 8, tmin: int = -24, tmax: int = 25) -> set[int]:
    """Table integers of every ``[x.w >= t]`` with integer ``w`` in ``[-wmax, wmax]^n``."""
    pts = all_points(n).astype(np.int64)
    grid = np.array(list(itertools.product(range(-wmax, wmax + 1), repeat=n)), dtype=np.int64)
    dots = grid @ pts.T
    place = np.array([1 << i for i in range(1 << n)], dtype=object)
    found: set[int] = set()
    for t in range(tmin, tmax + 1):
        rows = np.unique((dots >= t).astype(np.uint8), axis=0)
        found.update(int(r.astype(object) @ place) for r in rows)
    return found


# paper-core


def _xor_parity(b: Budgets):
    got = {ell: preserves_B_fast(XOR2, ell, b.multisets) for ell in range(2, 8)}
    return all(v == (ell % 2 == 1) for ell, v in got.items()), {str(k): v for k, v in got.items()}


def _fast_equals_raw(b: Budgets):
    mismatches = []
    count = 0
    for f in _functions_upto(3):
        for ell in (2, 3):
            count += 1
            if preserves_B_fast(f, ell, b.multisets) != preserves(f, make_B(ell), b.columns):
                mismatches.append([str(f), ell])
    return not mismatches, {"cases": count, "mismatches": mismatches}


def _threshold_oracle(b: Budgets):
    mismatches = []
    for n in (1, 2, 3):
        oracle = integer_threshold_tables(n)
        for f in all_functions(n):
            if (is_threshold(f, prefilter=False) is not None) != (f.to_int() in oracle):
                mismatches.append(str(f))
    return not mismatches, {"functions": 4 + 16 + 256, "mismatches": mismatches}


def _forbidden_b2(b: Budgets):
    q = make_B(2)
    found = minimal_forbidden_minors(lambda f: preserves(f, q, b.columns), 2)
    expected = {str(canonical_form(XOR2)), str(canonical_form(XNOR2))}
    return {str(f) for f in found} == expected, [str(f) for f in found]


def _threshold_minor_closure(b: Budgets):
    rng = np.random.default_rng(b.seed)
    bad = []
    trials = 0
    while trials < 200:
        n = int(rng.integers(1, 5))
        f = BoolFn.from_int(n, int(rng.integers(0, 1 << (1 << n))))
        if is_threshold(f) is None:
            continue
        trials += 1
        m = int(rng.integers(1, 5))
        sigma = [int(v) for v in rng.integers(1, m + 1, size=n)]
        g = minor(f, sigma, m)
        if is_threshold(g) is None:
            bad.append([str(f), sigma])
    return not bad, {"trials": trials, "counterexamples": bad}


def _paper_core(report: VerificationReport) -> None:
    _run(report, "xor-parity", "XOR2 preserves B_l exactly for odd l, l = 2..7", _xor_parity)
    _run(report, "fast-path-equals-raw", "multiset search agrees with column enumeration, arity <= 3, l = 2, 3", _fast_equals_raw)
    _run(report, "threshold-oracle", "exact LP agrees with integer weight search, arity <= 3", _threshold_oracle)
    _run(report, "forbidden-minors-B2", "minimal non-members of Pol B_2 up to arity 2 are XOR2 and XNOR2", _forbidden_b2)
    _run(report, "threshold-minor-closure", "minors of threshold functions are threshold (seeded sample)", _threshold_minor_closure)


# tz


def _rowcol(b: Budgets):
    subsets = row_col_subsets(3)
    return verify_row_col_lemma(3), [sorted(s) for s in subsets]


def _phi_examples(b: Budgets):
    w23 = phi(a_matrix(4, 2, 3), 13)
    t = phi(full_matrix(4), 13)
    ok = w23 == int("1101003011011101", 13) and t == int("3" * 16, 13)
    return ok, {"w23": str(w23), "t": str(t)}


def _dot_lines(b: Budgets):
    inst = build_tz(3)
    d = dot_classification(inst)
    return d["at_indices"] == line_indices(inst), {"below": d["below"], "at": d["at"], "above": d["above"]}


def _b_check(k: int, ell: int, expect: bool, periodic: bool = False, hyperplane: bool = True) -> Check:
    def check(b: Budgets):
        inst = build_tz(k)
        if periodic:
            w = periodic_witness(inst, ell)
            return True, {"method": "periodic", "witness": w.to_json()}
        res = tz_check_B(inst, ell, b.multisets, use_hyperplane=hyperplane)
        if res.witness is not None:
            res.witness.validate(inst.function)
        return res.preserves == expect, res.to_json()

    return check


def _f3_monotone(b: Budgets):
    return is_monotone(build_tz(3).function), None


def _f3_not_threshold(b: Budgets):
    return is_threshold(build_tz(3).function, prefilter=False) is None, None


def _f3_minors(b: Budgets):
    f = build_tz(3).function
    minors = identification_minors(f)
    certs = {f"{i},{j}": is_threshold(g) for (i, j), g in minors.items()}
    ok = len(certs) == 36 and all(c is not None and verify_certificate(minors[tuple(map(int, k.split(",")))], c) for k, c in certs.items())
    return ok and is_minimally_non_threshold(f), {"minors": len(certs)}


def _antichain(b: Budgets):
    i3, i4 = build_tz(3), build_tz(4)
    f3, f4 = i3.function, i4.function
    all_essential = len(essential_variables(f3)) == 9 and len(essential_variables(f4)) == 16
    f4_b3 = tz_check_B(i4, 3, b.multisets).preserves
    f3_b3 = tz_check_B(i3, 3, b.multisets).preserves
    # f_4 has more essential arguments; f_3 fails a constraint that f_4 (and its minors) keep
    return all_essential and f4_b3 and not f3_b3, {"f4_in_B3": f4_b3, "f3_in_B3": f3_b3}


def _tz(report: VerificationReport) -> None:
    _run(report, "rowcol-lemma", "cell sets summing to the all-(k-1) matrix are the rows and columns, k = 3", _rowcol)
    _run(report, "phi-examples", "w^{2,3} and t in base 13 for k = 4", _phi_examples)
    _run(report, "dot-equals-t-on-lines", "x.w = t exactly on rows and columns, k = 3", _dot_lines)
    _run(report, "f3-B2", "f_3 preserves B_2", _b_check(3, 2, True, hyperplane=False))
    _run(report, "f3-B3", "f_3 violates B_3, witness re-validated", _b_check(3, 3, False, hyperplane=False))
    _run(report, "f3-B6", "f_3 violates B_6 by the periodic witness", _b_check(3, 6, False, periodic=True))
    _run(report, "f4-B4", "f_4 violates B_4 by the periodic witness", _b_check(4, 4, False, periodic=True))
    _run(report, "f4-B2", "f_4 preserves B_2 (hyperplane-restricted search)", _b_check(4, 2, True))
    _run(report, "f4-B3", "f_4 preserves B_3 (hyperplane-restricted search)", _b_check(4, 3, True))
    _run(report, "f3-monotone", "f_3 is monotone", _f3_monotone)
    _run(report, "f3-not-threshold", "the LP for f_3 is infeasible", _f3_not_threshold)
    _run(report, "f3-minimally-non-threshold", "all 36 identification minors of f_3 are threshold", _f3_minors)
    _run(report, "f3-f4-antichain", "f_3 and f_4 are incomparable under minors", _antichain)


# constructions


def _construction_equivalence(b: Budgets):
    bad = []
    count = 0
    for f in _functions_upto(2):
        for tag in (ConstructionTag.GS, ConstructionTag.GMC, ConstructionTag.GUINF):
            g = construct(f, tag)
            if not membership_report(g, tag)["member"]:
                bad.append([str(f), tag.value, "membership"])
            for ell in (2, 3):
                count += 1
                if preserves_B_fast(f, ell, b.multisets) != preserves(g, make_B(ell), b.columns):
                    bad.append([str(f), tag.value, ell])
    return not bad, {"cases": count, "failures": bad}


def _gsm_xor(b: Budgets):
    g = construct(XOR2, ConstructionTag.GSM)
    member = membership_report(g, ConstructionTag.GSM)["member"]
    w = equal_sums_witness(XOR2, 2, b.multisets)
    up = transport_witness_up(w, XOR2, ConstructionTag.GSM, g)
    keeps_b3 = equal_sums_witness(g, 3, b.multisets) is None
    return member and keeps_b3, {"g": str(g), "member_SM": member, "B2_witness": up.to_json(), "B3_preserved": keeps_b3}


def _chain(tag: ConstructionTag) -> Check:
    def check(b: Budgets):
        inst = build_tz(3)
        f = inst.function
        g = construct(f, tag)
        member = is_member(g, tag.target)
        w = tz_check_B(inst, 3, b.multisets, use_hyperplane=False).witness
        if w is None:
            return False, {"error": "no B_3 witness for f_3"}
        up = transport_witness_up(w, f, tag, g)
        return member, {"arity": g.arity, "member": member, "B3_witness": up.to_json()}

    return check


def _constructions(report: VerificationReport) -> None:
    _run(report, "construction-equivalence", "g_s, g_mc, g_uinf keep B_l behaviour and land in S, Mc, U_inf, arity <= 2", _construction_equivalence)
    _run(report, "gsm-xor2", "g_sm(XOR2) lies in SM, violates B_2, preserves B_3", _gsm_xor)
    for tag in (ConstructionTag.GSM, ConstructionTag.GMCUINF, ConstructionTag.GMCWINF):
        target = tag.target
        _run(report, f"chain-{target}-B3", f"G(f_3) lies in {target} and violates B_3", _chain(tag))
        _skip(report, f"chain-{target}-B2", "G(f_3) preserves B_2", "arity-20 multiset search is beyond desk budget")


# classification


def _members(c: CloneId, n: int) -> list[BoolFn]:
    return [f for f in _functions_upto(n) if is_member(f, c)]


def _classification_table(b: Budgets):
    table = {}
    bad = []
    for c in catalogue((2, 3, INF)):
        v = classify_intersection(c)
        table[str(c)] = v.to_json()
        if v.finitely_characterizable:
            # every member at arity <= 3 lies in one of L, V, Lambda
            uppers = [CloneId(name) for name in v.contained_in]
            ok = all(any(is_member(f, u) for u in uppers) for f in _members(c, 3))
        else:
            e = witness_clone(v.reason)
            ok = all(is_member(f, c) for f in _members(e, 3))
        if not ok:
            bad.append(str(c))
        if v.finitely_characterizable != (v.reason == FINITE):
            bad.append(str(c))
    return not bad, {"verdicts": table, "failures": bad}


def _linear_threshold(b: Budgets):
    lin = [f for f in _members(CloneId("L"), 3) if is_threshold(f) is not None]
    unary = _members(CloneId("Omega1"), 3)
    return {str(f) for f in lin} == {str(f) for f in unary}, {"count": len(lin)}


def _lam_v_threshold(b: Budgets):
    bad = [str(f) for c in ("Lam", "V") for f in _members(CloneId(c), 3) if is_threshold(f) is None]
    return not bad, {"non_threshold": bad}


def _classification(report: VerificationReport) -> None:
    _run(report, "classification-table", "C meet thr is finitely characterizable exactly below L, V or Lambda", _classification_table)
    _run(report, "linear-threshold", "L meet thr = Omega(1), arity <= 3", _linear_threshold)
    _run(report, "lam-v-threshold", "Lambda and V lie inside thr, arity <= 3", _lam_v_threshold)


_SUITES = {
    "paper-core": _paper_core,
    "tz": _tz,
    "constructions": _constructions,
    "classification": _classification,
}


def run_suite(name: str, budgets: Budgets | None = None) -> VerificationReport:
    if name not in _SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    report = VerificationReport(name, budgets or Budgets())
    _SUITES[name](report)
    return report


def tz_report(k: int, check: str = "all", budgets: Budgets | None = None) -> VerificationReport:
    """Checks on a single ``f_k``: ``rowcol``, ``monotone``, ``B=<l>`` or ``all``."""
    report = VerificationReport(f"tz-k{k}", budgets or Budgets())
    inst = build_tz(k)
    if check == "all":
        checks = ["rowcol", "monotone", "B=2", f"B={k}"]
    else:
        checks = [check]
    for name in checks:
        if name == "rowcol":
            _run(report, "rowcol-lemma", f"cell sets summing to the all-{k - 1} matrix are the {2 * k} lines",
                 lambda b: (verify_row_col_lemma(k), None))
        elif name == "monotone":
            _run(report, "monotone", f"f_{k} is monotone", lambda b: (is_monotone(inst.require_function()), None))
        elif name.startswith("B="):
            try:
                ell = int(name[2:])
            except ValueError:
                raise DomainError(f"bad check {name!r}") from None
            expect = ell % k != 0

            def b_check(b: Budgets, ell=ell, expect=expect):
                res = tz_check_B(inst, ell, b.multisets)
                return res.preserves == expect, res.to_json()

            _run(report, f"B{ell}", f"f_{k} {'preserves' if expect else 'violates'} B_{ell}", b_check)
        else:
            raise DomainError(f"unknown check {name!r}; use all, rowcol, monotone or B=<l>")
    return report
