import json
import subprocess
import sys

import pytest

from thrclone.boolfn import AND2, MAJ3, parse_fn
from thrclone.cli import main
from thrclone.exceptions import DomainError, ParseError
from thrclone.reports import FAIL, PASS, SKIPPED, Budgets, CheckRecord, VerificationReport, emit_report, run_suite, tz_report


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


class TestParse:
    def test_examples(self):
        assert parse_fn("2:8") == AND2
        assert parse_fn("3:E8") == MAJ3
        with pytest.raises(ParseError):
            parse_fn("2:G1")


@pytest.fixture(scope="module")
def tz():
    return run_suite("tz")


class TestReports:
    def test_tz_suite(self, tz):
        assert tz.record("rowcol-lemma").verdict == PASS
        assert tz.passed

    def test_paper_core(self):
        r = run_suite("paper-core")
        rec = r.record("xor-parity")
        assert rec.verdict == PASS
        assert rec.witness == {"2": False, "3": True, "4": False, "5": True, "6": False, "7": True}

    def test_classification(self):
        r = run_suite("classification")
        table = r.record("classification-table").witness["verdicts"]
        assert table["Lamc"]["finitely_characterizable"]
        assert not table["SM"]["finitely_characterizable"]
        assert r.passed

    def test_constructions_skip_recorded(self):
        r = run_suite("constructions")
        skipped = [rec for rec in r.records if rec.verdict == SKIPPED]
        assert len(skipped) == 3 and all(rec.planned_skip for rec in skipped)
        assert r.passed

    def test_deterministic(self, tz):
        again = run_suite("tz")
        assert emit_report(tz) == emit_report(again)
        assert json.loads(emit_report(tz))["schema"] == 1

    def test_budget_exhaustion_is_not_a_pass(self):
        r = run_suite("paper-core", Budgets(multisets=3))
        assert r.record("xor-parity").verdict == SKIPPED
        assert not r.passed

    def test_overall_verdict(self):
        r = VerificationReport("x", Budgets(), [CheckRecord("a", "", PASS), CheckRecord("b", "", FAIL)])
        assert not r.passed
        assert b"FAIL" in emit_report(r, "text")

    def test_seed_embedded(self):
        r = run_suite("classification", Budgets(seed=11))
        assert json.loads(emit_report(r))["seed"] == 11

    def test_unknown(self):
        with pytest.raises(DomainError):
            run_suite("nope")
        with pytest.raises(DomainError):
            tz_report(3, "bogus")


class TestCli:
    def test_threshold(self, capsys):
        code, out = run_json(capsys, "threshold", "--fn", "2:8", "--certificate")
        assert code == 0 and out["schema"] == 1
        assert out["threshold"] and out["t"] == "2/1" and out["weights"] == ["1/1", "1/1"]

    def test_threshold_minimal(self, capsys):
        _, out = run_json(capsys, "threshold", "--fn", "2:6", "--minimal")
        assert out["threshold"] is False and out["minimally_non_threshold"]

    def test_parse_error_exit(self, capsys):
        code, out = run_json(capsys, "threshold", "--fn", "2:G1")
        assert code == 2 and out["error"] == "ParseError" and not out["pass"]

    def test_preserves(self, capsys):
        _, out = run_json(capsys, "preserves", "--fn", "2:6", "--B", "2", "--B", "3")
        assert [r["preserves"] for r in out["results"]] == [False, True]
        assert out["results"][0]["violation"]["z"] == [0, 0, 1, 1]

    def test_asummable(self, capsys):
        _, out = run_json(capsys, "asummable", "--fn", "2:6", "--ell", "2", "3")
        assert [r["preserves"] for r in out["results"]] == [False, True]

    def test_analyze(self, capsys):
        _, out = run_json(capsys, "analyze", "--fn", "3:E8")
        assert "SM" in out["clones"] and out["monotone"] and out["preserves"] == {"B2": True, "B3": True}

    def test_clone(self, capsys):
        _, out = run_json(capsys, "clone", "--clone", "M", "--fn", "3:E8", "--crosscheck")
        assert out["member"] and out["constraints"] == ["2;0,1,3|2;0,1,3"]

    def test_construct(self, capsys):
        code, out = run_json(capsys, "construct", "--tag", "gs", "--fn", "2:8")
        assert code == 0 and out["constructed"] == "3:D4" and out["membership"]["member"]

    def test_tz(self, capsys):
        code, out = run_json(capsys, "tz", "--k", "3", "--check", "all")
        assert code == 0 and out["pass"] and len(out["records"]) == 4

    def test_tz_b3_witness(self, capsys):
        _, out = run_json(capsys, "tz", "--k", "3", "--check", "B=3")
        assert out["records"][0]["witness"]["witness"]["ell"] == 3

    def test_classify(self, capsys):
        _, out = run_json(capsys, "classify", "--all")
        assert len(out["verdicts"]) == 54

    def test_pol(self, capsys):
        _, out = run_json(capsys, "pol", "--constraint", "2;0,1,3|2;0,1,3", "--max-arity", "2")
        assert out["counts"] == {"1": 3, "2": 6}

    def test_forbidden(self, capsys):
        _, out = run_json(capsys, "forbidden-minors", "--B", "2")
        assert out["minimal_forbidden_minors"] == ["2:6", "2:9"]

    def test_missing_constraint(self, capsys):
        code, out = run_json(capsys, "pol")
        assert code == 2 and out["error"] == "DomainError"

    def test_text_format(self, capsys):
        code, out = run_cli(capsys, "--format", "text", "threshold", "--fn", "2:6")
        assert code == 0 and "threshold: False" in out

    def test_flags_after_command(self, capsys):
        code, out = run_cli(capsys, "suite", "classification", "--format", "text", "--seed", "3")
        assert code == 0 and "seed 3" in out

    def test_suite_json(self, capsys):
        code, out = run_json(capsys, "suite", "classification")
        assert code == 0 and out["schema"] == 1 and out["pass"]

    def test_module_entry(self):
        proc = subprocess.run(
            [sys.executable, "-m", "thrclone", "threshold", "--fn", "3:E8"], capture_output=True, text=True
        )
        assert proc.returncode == 0 and json.loads(proc.stdout)["threshold"]
