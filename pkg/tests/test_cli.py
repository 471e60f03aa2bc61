import csv
import json
import subprocess
import sys

import pytest

from cremona.cli import main

SIGMA = "[x1*x2 : x0*x2 : x0*x1]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json", "-")
    doc = json.loads(out)
    assert doc["schema"] == 1
    return code, doc


def test_compose_sigma(capsys):
    code, doc = run_json(capsys, "compose", SIGMA, SIGMA)
    assert code == 0
    assert doc["kind"] == "compose" and doc["result"] == "[x0 : x1 : x2]"
    assert doc["cofactor"] == "x0*x1*x2"


def test_order(capsys):
    code, doc = run_json(capsys, "order", SIGMA)
    assert code == 0 and doc["order"] == 2


def test_eval_and_indeterminacy(capsys):
    code, doc = run_json(capsys, "eval", SIGMA, "1,2,3")
    assert code == 0 and doc["image"] == ["3", "3/2", "1"]
    code, out, _ = run(capsys, "eval", SIGMA, "[1:0:0]")
    assert code == 0 and "indeterminate" in out


def test_certify_inverse_exit_codes(capsys):
    assert run(capsys, "certify-inverse", SIGMA, SIGMA)[0] == 0
    assert run(capsys, "certify-inverse", SIGMA, "[x0 : x1 : x2]")[0] == 1


def test_limit_pointwise_family(capsys):
    code, doc = run_json(capsys, "limit", "--family", "pointwise", "--m-min", "10", "--m-max", "40")
    assert code == 0 and doc["reduced_limit_is_identity"] is True


def test_padic_gate(capsys):
    code, doc = run_json(capsys, "padic-gate", "[x0 : x1 + 9*x0 : x2]")
    assert code == 0
    assert doc["verdict"]["kind"] == "NotApplicable" and doc["verdict"]["norm"] == "1/9"


def test_cloud_csv(capsys, tmp_path):
    path = tmp_path / "cloud.csv"
    code, doc = run_json(capsys, "cloud", "--eps", "0.1", "--N", "50", "--csv", str(path))
    assert code == 0 and doc["N"] == 50 and 0 < doc["covering_radius"] < 2
    rows = list(csv.reader(path.open()))
    assert len(rows) >= 50


def test_scenario_list_and_run(capsys):
    code, out, _ = run(capsys, "scenario", "list")
    assert code == 0 and "sigma-involution" in out
    code, doc = run_json(capsys, "scenario", "sigma-involution")
    assert code == 0 and doc["passed"] is True


def test_scenario_param_override(capsys):
    code, doc = run_json(capsys, "scenario", "unbounded-degree", "--param", "m_max=4")
    assert code == 0 and doc["params"]["m_max"] == 4


@pytest.mark.parametrize("argv", [
    ["scenario", "nope"],
    ["compose", "[x0 : x1]", "[x0 : x5]"],
    ["compose", "[x0^2 : x1 : x2]", SIGMA],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_position_caret_in_error(capsys):
    _, _, err = run(capsys, "compose", "[x0 : x1]", "[x0 : x5]")
    assert "^" in err and "x5" in err


def test_json_output_is_byte_identical(capsys):
    first = run(capsys, "scenario", "moving-lines", "--json", "-")[1]
    second = run(capsys, "scenario", "moving-lines", "--json", "-")[1]
    assert first == second


def test_json_to_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    assert run(capsys, "order", SIGMA, "--json", str(path))[0] == 0
    assert json.loads(path.read_text())["order"] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "cremona.cli", "order", SIGMA], capture_output=True, text=True)
    assert r.returncode == 0 and "2" in r.stdout
