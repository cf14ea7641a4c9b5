import json
import subprocess
import sys
from pathlib import Path

import pytest

from courantcalc import presets

REPO = Path(__file__).resolve().parent.parent


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "courantcalc.cli", *args],
        capture_output=True, text=True, cwd=REPO)


def test_check_axioms_preset_file():
    result = run_cli("check-axioms", "presets/standard2.json")
    assert result.returncode == 0
    assert "passed: True" in result.stdout


def test_check_axioms_preset_name_json_format():
    result = run_cli("check-axioms", "so3_killing", "--format", "json")
    assert result.returncode == 0
    body = json.loads(result.stdout)
    assert body["passed"] is True


def test_bracket_command():
    result = run_cli("bracket", "standard1", "--a", '["1","0"]', "--b", '["0","x1"]')
    assert result.returncode == 0
    assert "['0', '1']" in result.stdout


def test_exit_code_on_check_failure(tmp_path):
    bad = presets.structure_to_json(presets.negative_control())
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    result = run_cli("check-axioms", str(path))
    assert result.returncode == 1
    assert "FAIL" in result.stdout


def test_exit_code_on_input_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    result = run_cli("check-axioms", str(path))
    assert result.returncode == 2
    result = run_cli("check-axioms", "unknown_preset_name")
    assert result.returncode == 2


def test_json_reports_are_byte_identical():
    first = run_cli("check-axioms", "standard2", "--seed", "7", "--format", "json")
    second = run_cli("check-axioms", "standard2", "--seed", "7", "--format", "json")
    assert first.stdout == second.stdout and first.returncode == 0


def test_unimodular_and_cohomology_commands():
    result = run_cli("unimodular", "standard2", "--bound", "2", "--format", "json")
    assert result.returncode == 0
    assert json.loads(result.stdout)["status"] == "exact"
    result = run_cli("cohomology", "so3_killing", "--k", "0", "--format", "json")
    assert json.loads(result.stdout)["dim"] == 1


def test_dirac_check_exit_codes():
    good = json.dumps({"sections": [["1", "0", "0", "0"], ["0", "1", "0", "0"]]})
    result = run_cli("dirac-check", "standard2", "--frame", good)
    assert result.returncode == 0
    twisted_frame = json.dumps({"sections": [
        ["1", "0", "0", "0", "0", "0"],
        ["0", "1", "0", "0", "0", "0"],
        ["0", "0", "1", "0", "0", "0"]]})
    result = run_cli("dirac-check", "standard_twisted3", "--frame", twisted_frame)
    assert result.returncode == 1


def test_curvature_with_connection_file(tmp_path):
    connection = {"m": 1, "gamma": [[["x2"]], [["0"]], [["0"]], [["0"]]]}
    path = tmp_path / "conn.json"
    path.write_text(json.dumps(connection))
    result = run_cli("curvature", "standard2", "--connection", str(path),
                     "--format", "json")
    assert result.returncode == 0
    assert "entries" in json.loads(result.stdout)


def test_witness_replays_from_cli_report(tmp_path):
    from courantcalc.courant import replay_witness

    bad = presets.negative_control()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(presets.structure_to_json(bad)))
    result = run_cli("check-axioms", str(path), "--format", "json")
    body = json.loads(result.stdout)
    c3 = next(c for c in body["checks"] if c["axiom"] == "C3")
    assert replay_witness(bad, c3["witness"])
