from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from birdeg import cli
from conftest import SAMPLES


def sample(name: str) -> str:
    return os.path.join(SAMPLES, name)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_analyze_golden_with_oracle(capsys):
    code, rep = run_json(capsys, "analyze", sample("b2.json"), "--oracle", "--n", "10")
    assert code == 0
    assert rep["structure"] == "Lc={{2}} Lo={}"
    assert rep["delta"]["value"] == "1.618033988750"
    assert rep["charpoly"] == "x^3 - 2*x^2 + 1"
    assert rep["generating_denominator"] == "x^3 - 2*x + 1"
    assert rep["degrees"][:6] == [1, 2, 4, 7, 12, 20]
    assert rep["oracle"]["status"] == "agrees"
    assert rep["recursion_holds"] is True and rep["bounds_ok"] is True


def test_analyze_not_elementary_exit_2(capsys):
    code, rep = run_json(capsys, "analyze", sample("a1.json"))
    assert code == 2
    assert rep["diagnostic_orbit"]["start"] == 1


def test_invalid_inputs_exit_1(capsys, tmp_path):
    assert run(capsys, "analyze", sample("singular_L.json"))[0] == 1
    assert run(capsys, "perm", sample("bad_weights.json"))[0] == 1
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "structure", str(bad))
    assert code == 1 and err.startswith("error:") and out == ""
    nodim = tmp_path / "nodim.json"
    nodim.write_text(json.dumps({"closed": [[2]]}))
    assert run(capsys, "structure", str(nodim))[0] == 1


def test_oracle_mismatch_exit_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "generic_line_degree", lambda *a, **k: [1, 2, 5])
    code, rep = run_json(capsys, "degrees", sample("b2.json"), "--oracle", "--n", "2")
    assert code == 3 and rep["oracle"]["degrees"] == [1, 2, 5]


def test_structure_report(capsys):
    code, rep = run_json(capsys, "structure", sample("s_appendix_open.json"), "--d", "4")
    assert code == 0
    assert rep["lists"][0]["T"] == "x^25"
    assert rep["lists"][0]["S"] == "x^18 + x^17 + x^15 + x^8 + x^7 + 1"
    assert rep["formula_matches_matrix"] is True


def test_compare(capsys):
    code, rep = run_json(capsys, "compare", sample("s_golden.json"), sample("s_three.json"), "--d", "2")
    assert code == 0 and rep["sign"] == 1
    assert {"relation": "longer-orbits", "predicted": ">", "holds": True} in rep["relations"]


def test_perm_and_degrees(capsys):
    code, rep = run_json(capsys, "perm", sample("gen2_d3.json"), "--n", "8")
    assert code == 0 and rep["chain_counts"] == {"1": 2, "2": 2}
    assert rep["degrees"] == [1, 3, 5, 11, 17, 27, 37, 51, 65]
    code, rep = run_json(capsys, "degrees", sample("gen2_d3.json"), "--n", "5", "--oracle")
    assert code == 0 and rep["oracle"]["status"] == "agrees"


def test_json_is_stable(capsys):
    first = run(capsys, "analyze", sample("c_sym_q1.json"), "--json")[1]
    second = run(capsys, "analyze", sample("c_sym_q1.json"), "--json")[1]
    assert first == second
    rep = json.loads(first)
    assert json.loads(json.dumps(rep)) == rep


def test_human_output(capsys):
    code, out, _ = run(capsys, "structure", sample("s_empty_d3.json"), "--d", "3", "--n", "4")
    assert code == 0
    assert any(line.strip().startswith("degrees: [1, 3, 9, 27, 81]") for line in out.splitlines())


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "birdeg", "degrees", sample("b1.json"), "--n", "5", "--json"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["degrees"] == [1, 2, 4, 8, 15, 28]


def test_usage_error():
    with pytest.raises(SystemExit):
        cli.main(["nonsense"])
