import json
import subprocess
import sys

import pytest

from epsalg.cli import main, report_emit, run


def test_center_supermatrix(capsys):
    assert main(["center", "--algebra", "supermatrix:2,1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "dim Z = 1, basis {1}"


def test_check_factor_valid_and_invalid():
    assert run(["check-factor", "--group", "Z2", "--values", "[[-1]]"])[0] == 0
    code, rep, _ = run(["check-factor", "--group", "Z2", "--values", "[[2]]", "--format", "json"])
    assert code == 1
    assert rep["violated"] == "eps(e_r,e_r)=±1" and rep["at"] == [1, 1]


def test_derivations_report():
    code, rep, _ = run(["derivations", "--algebra", "supermatrix:2,1", "--format", "json"])
    assert code == 0 and rep["total_dim"] == 8 and rep["outer"] == 0


def test_cohomology_report():
    code, rep, _ = run(["cohomology", "--algebra", "matrix:2", "--max-form-degree", "3", "--format", "json"])
    assert code == 0 and rep["dims"] == [1, 0, 0, 1]


def test_moyal_commands():
    code, rep, _ = run(["moyal", "star", "x1", "x2", "--format", "json"])
    assert code == 0 and rep["commutator"] == "i*theta"
    code, rep, _ = run(["moyal", "bracket-table", "--format", "json"])
    assert code == 0
    st = [r["status"] for r in rep["rows"]]
    assert st == ["MATCH"] * 7 + ["MISPRINT"] * 3


def test_moyal_curvature_check(tmp_path):
    f = tmp_path / "fields.json"
    f.write_text(json.dumps({"A0": ["x1", "x2^2"], "A1": ["0", "i*x1"], "phi": "x1*x2",
                             "G": [["1", "x1"], ["x1", "0"]]}))
    code, rep, _ = run(["moyal", "curvature-check", "--fields", str(f), "--format", "json"])
    assert code == 0


@pytest.mark.parametrize("argv,code", [
    (["build", "--algebra", "bogus"], 2),
    (["center", "--algebra", "supermatrix:2,1", "--conductor", "100"], 3),
    (["center", "--algebra", "supermatrix:2,1", "--conductor", "0"], 3),
    (["moyal", "--conductor", "6", "star", "x1", "x2"], 3),
    (["moyal", "star", "x1", "x1+"], 2),
    (["check-factor", "--group", "Z2", "--values", "[[-1]"], 2),
])
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"algebra": "supermatrix:2,1", "format": "json"}))
    code, rep, fmt = run(["center", "--config", str(cfg)])
    assert code == 0 and fmt == "json" and rep["dim"] == 1
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"algebra": "matrix:2", "colour": 1}))
    assert run(["center", "--config", str(bad)])[0] == 2


def test_json_deterministic_and_roundtrips():
    argv = ["traces", "--algebra", "color:1,1,1,1:super", "--format", "json"]
    a = report_emit(run(argv)[1], "json")
    b = report_emit(run(argv)[1], "json")
    assert a == b
    assert report_emit(json.loads(a), "json") == a


def test_console_script_quick_verify():
    out = subprocess.run([sys.executable, "-m", "epsalg.cli", "verify-all", "--quick", "--format", "json"],
                         capture_output=True, text=True, timeout=600)
    assert out.returncode == 0, out.stderr
    rep = json.loads(out.stdout)
    assert rep["overall"] == "PASS"
    st = {c["id"]: c["status"] for c in rep["checks"]}
    assert st["grassmann"] == "MISPRINT" and st["moyal"] == "MISPRINT"
    assert all(v == "PASS" for k, v in st.items() if k not in ("grassmann", "moyal"))
