import json
import subprocess
import sys

import pytest

from webcalc import rep_engine as re_
from webcalc.cli import EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from webcalc.linear_algebra import LinMap
from webcalc.rep_engine import LeviDatum
from webcalc.scalar_field import FieldElem, parse_scalar, quantum_integer


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dim_example(capsys):
    code, out, _ = run(capsys, "dim", "--n", "2", "--levi", "1,1", "--m", "2")
    assert code == EXIT_OK
    assert json.loads(out) == 6


def test_circle_single_block_example(capsys):
    code, out, _ = run(capsys, "circle", "--n", "3", "--levi", "3", "--k", "1", "--side", "left")
    assert code == EXIT_OK
    rec = json.loads(out)
    want = FieldElem.v(-3) * quantum_integer(3) * FieldElem.u(1)
    assert parse_scalar(rec["computed"]) == want
    assert rec["equal"] is True


def test_eval_prints_matrix(tmp_path, capsys):
    f = tmp_path / "digon.web"
    f.write_text("# digon\nsplit(1,1) ; merge(1,1)\n")
    code, out, _ = run(capsys, "eval", "--file", str(f), "--n", "2")
    assert code == EXIT_OK
    got = LinMap.from_json(out, 2)
    ctx = LeviDatum(2)
    assert got == quantum_integer(2) * re_.identity((2,), ctx)


def test_eval_type_error_has_location(tmp_path, capsys):
    f = tmp_path / "bad.web"
    f.write_text("merge(1,1)\n  ; capR(1)\n")
    code, out, err = run(capsys, "eval", "--file", str(f), "--n", "2")
    assert code == EXIT_INPUT
    assert out == ""
    assert "line 2, column 3" in err


def test_eval_syntax_error(tmp_path, capsys):
    f = tmp_path / "bad.web"
    f.write_text("merge(1,)")
    code, _, err = run(capsys, "eval", "--file", str(f), "--n", "2")
    assert code == EXIT_INPUT
    assert "column 9" in err


def test_missing_file_is_input_error(tmp_path, capsys):
    code, _, _ = run(capsys, "eval", "--file", str(tmp_path / "nope.web"), "--n", "2")
    assert code == EXIT_INPUT


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["dim", "--m", "2"],
    ["dim", "--n", "3", "--levi", "1,1", "--m", "2"],
    ["check", "--suite", "nonsense"],
    ["eval", "--file", "x", "--n", "2", "--mode", "spec"],
])
def test_usage_errors(argv, capsys, tmp_path):
    if argv[:1] == ["eval"]:
        f = tmp_path / "x.web"
        f.write_text("id([1])")
        argv = [a if a != "x" else str(f) for a in argv]
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_usage_and_check_failure_codes_differ():
    assert len({EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INPUT}) == 4


def test_ak_report(capsys):
    code, out, _ = run(capsys, "ak", "--n", "2", "--levi", "1,1", "--m", "2", "--check", "dimension")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["blob_dimension"] == rep["image_rank"] == 6
    assert rep["relations_ok"] is None


def test_check_suite_writes_jsonl(capsys):
    code, out, err = run(capsys, "check", "--suite", "circle_evaluation", "--only", "n1/")
    assert code == EXIT_OK
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines and all(r["status"] == "pass" and r["elapsed_ms"] == 0 for r in lines)
    assert "circle_evaluation" in err


def test_spec_mode_eval(tmp_path, capsys):
    f = tmp_path / "loop.web"
    f.write_text("cupL(1) ; capR(1)")
    code, out, _ = run(capsys, "eval", "--file", str(f), "--n", "2", "--mode", "spec",
                       "--point", "v=3,u1=5", "--prime", "101")
    assert code == EXIT_OK
    assert json.loads(out)


def test_output_flag(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "dim", "--n", "2", "--levi", "1,1", "--m", "1", "--output", str(dest))
    assert code == EXIT_OK and out == ""
    assert json.loads(dest.read_text()) == 2


def test_config_file_supplies_defaults_and_flags_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nn = 2\nlevi = 1,1\n")
    _, out, _ = run(capsys, "dim", "--config", str(cfg), "--m", "2")
    assert json.loads(out) == 6
    _, out, _ = run(capsys, "dim", "--config", str(cfg), "--n", "2", "--levi", "2", "--m", "2")
    assert json.loads(out) == 2


def test_bad_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    code, _, _ = run(capsys, "dim", "--config", str(cfg), "--n", "2", "--m", "1")
    assert code == EXIT_USAGE


def test_seed_from_environment(monkeypatch, capsys):
    argv = ["ak", "--n", "2", "--levi", "1,1", "--m", "2", "--check", "dimension"]
    monkeypatch.setenv("WEBCALC_SEED", "17")
    _, env_out, _ = run(capsys, *argv)
    monkeypatch.delenv("WEBCALC_SEED")
    _, flag_out, _ = run(capsys, *argv, "--seed", "17")
    assert env_out == flag_out
    monkeypatch.setenv("WEBCALC_SEED", "not-a-number")
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


def test_console_output_is_byte_identical():
    argv = [sys.executable, "-m", "webcalc", "check", "--suite", "monoidality", "--seed", "4"]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
