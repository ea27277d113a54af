import io
import json
import sys

import pytest

from conftest import SYSTEMS
from plainrws.cli import RunConfig, main
from plainrws.presentations import gen_plain, parse_factors
from plainrws.rewrite_core import parse_system


def run_cli(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_z(capsys):
    code, out, _ = run_cli(capsys, "check", str(SYSTEMS / "z.rws"))
    assert code == 0
    assert out.splitlines()[0] == "convergent, length-reducing, presents group"


def test_gen_pipe_check(capsys, monkeypatch):
    code, text, _ = run_cli(capsys, "gen", "plain", "--factors", "C2,C3")
    assert code == 0
    assert parse_system(text) == gen_plain(parse_factors("C2,C3"))
    code, out, _ = run_cli(capsys, "check", "-", "--format", "json", stdin=text, monkeypatch=monkeypatch)
    data = json.loads(out)
    assert code == 0 and data["convergent"] and data["max_lhs"] == 2


def test_gen_with_table(capsys):
    code, text, _ = run_cli(capsys, "gen", "plain", "--table", str(SYSTEMS / "c4.csv"), "--factors", "Z")
    assert code == 0
    rws = parse_system(text)
    assert len(rws.rules) == 9 + 2 and rws.report.convergent


def test_gen_needs_factors(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "plain"])


def test_check_nonconfluent_exit_code(capsys):
    code, out, _ = run_cli(capsys, "check", str(SYSTEMS / "nonconfluent.rws"))
    assert code == 1
    assert "aba" in out and "normal forms {a, aa}" in out


def test_normalize(capsys):
    code, out, _ = run_cli(capsys, "normalize", str(SYSTEMS / "c2_c3.rws"), "-w", "bbb")
    assert (code, out) == (0, "λ\n")
    code, out, _ = run_cli(capsys, "normalize", str(SYSTEMS / "z.rws"), "-w", "a A a")
    assert out == "a\n"


def test_parse_error_has_location(capsys, tmp_path):
    bad = tmp_path / "bad.rws"
    bad.write_text("letters: a\nrule: a q -> a\n")
    code, _, err = run_cli(capsys, "check", str(bad))
    assert code == 2
    assert f"{bad}:2:" in err


def test_missing_file(capsys):
    code, _, err = run_cli(capsys, "check", "/nonexistent.rws")
    assert code == 2 and "error" in err


def test_ball_outputs_are_deterministic(capsys, tmp_path):
    path = str(SYSTEMS / "c2_c3.rws")
    _, a, _ = run_cli(capsys, "ball", path, "-r", "4")
    _, b, _ = run_cli(capsys, "ball", path, "-r", "4")
    assert a == b and json.loads(a)["radius"] == 4
    _, dot, _ = run_cli(capsys, "ball", path, "-r", "2", "--format", "dot")
    assert dot.startswith("graph cayley_ball")
    out = tmp_path / "ball.json"
    code, printed, _ = run_cli(capsys, "ball", path, "-r", "4", "-o", str(out))
    assert code == 0 and printed == "" and out.read_text() == a


def test_ball_cap(capsys):
    code, _, err = run_cli(capsys, "ball", str(SYSTEMS / "c2_c3.rws"), "-r", "6", "--cap", "10")
    assert code == 2 and "exceeds" in err


def test_analyze_ball_and_edge_list(capsys, tmp_path):
    ball = tmp_path / "b.json"
    run_cli(capsys, "ball", str(SYSTEMS / "c2_c3.rws"), "-r", "5", "-o", str(ball))
    code, out, _ = run_cli(capsys, "analyze", str(ball))
    data = json.loads(out)
    assert code == 0 and data["geodetic"]["geodetic"]
    assert "certified" in data
    code, out, _ = run_cli(capsys, "analyze", str(SYSTEMS / "petersen.txt"))
    data = json.loads(out)
    assert data["iecs"]["max_length"] == 5 and data["broomlike"]["holds"]
    assert data["block_cut_tree"]["type_II"] == 1


def test_evidence(capsys):
    code, out, _ = run_cli(capsys, "evidence", str(SYSTEMS / "c2_c3.rws"), "-r", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["consistent_with_plain"] and data["max_iec"] == 3


def test_verify_circuit_diameter_builtin(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "theoremB", "--corpus", "builtin")
    assert code == 0
    lines = {line.split()[2]: line.split()[0] for line in out.splitlines() if line.startswith(("pass", "fail", "hyp"))}
    assert lines["C7"] == "hypotheses-not-met" and lines["C9"] == "hypotheses-not-met"
    assert lines["Petersen"] == "pass"


def test_verify_json_is_byte_identical(capsys):
    argv = ("verify", "--suite", "broomlike", "--corpus", "glued", "--seed", "3", "--format", "json")
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv)
    assert a == b and json.loads(a)["seed"] == 3


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("ball", radius=-1)
    with pytest.raises(ValueError):
        RunConfig("ball", cap=0)
    with pytest.raises(ValueError):
        RunConfig("verify", suite="everything")


def test_module_entry_point():
    import subprocess

    proc = subprocess.run([sys.executable, "-m", "plainrws", "check", str(SYSTEMS / "z.rws")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("convergent")
