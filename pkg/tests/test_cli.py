import csv
import io
import json
import math

import pytest

from sugeno_hh.cli import main

OMEGA = 0.567143290409783873


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, (json.loads(out) if out.strip() else None), err


class TestIntegrate:
    def test_json_record(self, capsys):
        code, rec, _ = run_json(capsys, "integrate", "--f", "exp(-x)")
        assert code == 0
        assert {"command", "inputs", "value", "residual", "method", "timing_ms"} <= set(rec)
        assert rec["value"] == pytest.approx(OMEGA, abs=1e-9)
        assert [r["method"] for r in rec["results"]] == ["fixed_point", "grid"]
        assert rec["difference"] <= rec["agreement_tolerance"]

    def test_deterministic(self, capsys):
        first = run_json(capsys, "integrate", "--f", "exp(-cos(x)-1)")[1]
        second = run_json(capsys, "integrate", "--f", "exp(-cos(x)-1)")[1]
        first.pop("timing_ms"), second.pop("timing_ms")
        assert first == second

    def test_single_method(self, capsys):
        code, rec, _ = run_json(capsys, "integrate", "--f", "exp(-x)", "--method", "grid", "--grid", "1001")
        assert code == 0 and rec["method"] == "grid"
        assert rec["results"][0]["iterations_or_gridsize"] == 1001

    def test_symbolic_endpoints(self, capsys):
        code, rec, _ = run_json(capsys, "integrate", "--f", "exp(-sin(2*x))", "--a", "pi/4", "--b", "pi/2")
        assert code == 0
        assert rec["inputs"]["a"] == math.pi / 4
        assert rec["value"] == pytest.approx(0.454403129681952, abs=1e-9)

    def test_fallback(self, capsys):
        code, rec, _ = run_json(capsys, "integrate", "--f", "0*x")
        assert code == 0 and rec["fallback"] and rec["value"] == 0.0
        assert len(rec["results"]) == 1

    def test_format_after_subcommand(self, capsys):
        code, out, _ = run(capsys, "integrate", "--f", "0.3", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and [r["method"] for r in rows] == ["fixed_point", "grid"]
        assert all(float(r["value"]) == 0.3 for r in rows)

    def test_table(self, capsys):
        code, out, _ = run(capsys, "integrate", "--f", "exp(-x)")
        header = out.splitlines()[0].split()
        assert code == 0 and header[:3] == ["command", "method", "value"]


class TestExitCodes:
    def test_parse_error(self, capsys):
        code, out, err = run(capsys, "integrate", "--f", "exp(-x")
        assert code == 2 and "position" in err and out == ""

    def test_reversed_interval(self, capsys):
        assert run(capsys, "integrate", "--f", "x", "--a", "1", "--b", "0")[0] == 2

    def test_bad_endpoint(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["integrate", "--f", "x", "--a", "pi/"])
        assert exc.value.code == 2

    def test_missing_config(self, capsys, tmp_path):
        assert run(capsys, "--config", str(tmp_path / "nope"), "integrate", "--f", "x")[0] == 2

    def test_evaluation_failure(self, capsys):
        code, _, err = run(capsys, "integrate", "--f", "ln(x-0.5)")
        assert code == 3 and "error" in err

    def test_negative_function(self, capsys):
        assert run(capsys, "integrate", "--f", "x-0.5")[0] == 3

    def test_verification_failure(self, capsys):
        # a bump with level endpoints is far from log-convex; its integral beats the bound
        code, rec, _ = run_json(capsys, "bound", "--f", "0.1+sin(pi*x)", "--verify")
        assert code == 4
        assert rec["report"]["sound"] is False and not rec["verification"]["holds"]

    def test_missing_expression(self, capsys):
        code, _, err = run(capsys, "integrate")
        assert code == 2 and "--f" in err

    def test_verify_paper_too_strict(self, capsys):
        code, rec, _ = run_json(capsys, "verify-paper", "--tol", "1e-16")
        assert code == 4 and rec["value"] != "5/5"


class TestBound:
    def test_worked(self, capsys):
        code, rec, _ = run_json(capsys, "bound", "--f", "exp(-sin(2*x))", "--a", "pi/4", "--b", "pi/2", "--verify")
        assert code == 0
        assert rec["case"] == "general_increasing"
        assert rec["bound"] == pytest.approx(0.517451426931794, abs=1e-12)
        assert rec["verification"]["holds"]

    def test_unit_form_on_unit_interval(self, capsys):
        rec = run_json(capsys, "bound", "--f", "exp(-x)")[1]
        assert rec["unit_form"]["case"] == "unit_decreasing"
        assert rec["unit_form"]["alpha"] == pytest.approx(rec["alpha"], abs=1e-10)

    def test_constant(self, capsys):
        rec = run_json(capsys, "bound", "--f", "1")[1]
        assert rec["bound"] == 1.0 and rec["case"] == "general_equal"

    def test_warning_on_stderr(self, capsys):
        code, rec, err = run_json(capsys, "bound", "--f", "sqrt(x+1)")
        assert code == 0 and rec["warnings"] and "log-convex" in err


def test_check_classical(capsys):
    code, rec, _ = run_json(capsys, "check-classical", "--f", "exp(-cos(x)-1)")
    assert code == 0
    assert rec["report"]["left_holds"] and not rec["report"]["right_holds"]


@pytest.mark.parametrize("tol", ["1e-3", "1e-6"])
def test_verify_paper(capsys, tol):
    code, rec, _ = run_json(capsys, "verify-paper", "--tol", tol)
    assert code == 0 and rec["value"] == "5/5"
    assert all(r["pass"] for r in rec["report"])


def test_verify_paper_table(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0 and out.rstrip().endswith("passed: 5/5")


class TestProperties:
    def test_seeded_suite(self, capsys):
        code, rec, _ = run_json(capsys, "properties", "--seed", "42", "--grid", "20001")
        assert code == 0
        passed, total = map(int, rec["value"].split("/"))
        assert passed == total > 20

    def test_single_function(self, capsys):
        code, rec, _ = run_json(capsys, "properties", "--f", "exp(-x)", "--grid", "20001")
        names = [c["name"] for c in rec["report"]]
        assert code == 0 and "monotonicity" in names and "majorant_dominates[exp(-x)]" in names


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nf = exp(-sin(2*x))\na = pi/4\nb = pi/2\nmethod = fixed\n")
    code, rec, _ = run_json(capsys, "--config", str(cfg), "integrate")
    assert code == 0 and rec["method"] == "fixed_point"
    assert rec["inputs"]["b"] == math.pi / 2
    assert rec["value"] == pytest.approx(0.454403129681952, abs=1e-9)
    # explicit flags win over the file
    rec = run_json(capsys, "--config", str(cfg), "integrate", "--f", "0.2")[1]
    assert rec["value"] == 0.2
