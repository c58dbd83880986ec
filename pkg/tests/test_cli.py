import json

import pytest

from qdilog import cli


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = cli.main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_verify_constants_all_groups(tmp_path):
    code, rep = run(tmp_path, "verify", "constants", "--group", "all")
    assert code == 0
    assert rep["schema_version"] == cli.SCHEMA_VERSION
    assert rep["summary"]["passed"] == rep["summary"]["total"] == 3
    assert "wall_seconds" in rep["timing"]
    assert rep["campaign"]["config"]["quad"]["rel_tol"] > 0


def test_record_layout(tmp_path):
    code, rep = run(tmp_path, "verify", "inversion", "--samples", "2", "--group", "real-zn", "--n", "3")
    assert code == 0
    r = rep["records"][0]
    assert set(r) >= {"inputs", "lhs", "rhs", "residual", "passed", "diagnostics"}
    assert set(r["lhs"]) == {"re", "im"} and isinstance(r["lhs"]["re"], str)


def test_jobs_do_not_change_records(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    _, ra = run(a, "verify", "inversion", "--samples", "4", "--group", "all", "--seed", "3")
    _, rb = run(b, "verify", "inversion", "--samples", "4", "--group", "all", "--seed", "3", "--jobs", "2")
    assert ra["records"] == rb["records"]


def test_failing_tolerance_exits_1(tmp_path):
    code, rep = run(tmp_path, "verify", "inversion", "--samples", "2", "--tol", "1e-30")
    assert code == 1
    assert rep["summary"]["all_passed"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "inversion", "--samples", "0"],
        ["verify", "inversion", "--jobs", "0"],
        ["verify", "inversion", "--group", "circle-z", "--q-modulus", "1.5"],
        ["eval", "phi", "0", "1"],
        ["eval", "phi", "abc"],
        ["free-energy", "--formula", "pf-field"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2


def test_bad_config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text('{"quad": {"rel_tol": -1}}')
    assert cli.main(["verify", "constants", "--config", str(p)]) == 2


def test_eval_phi_unimodular(capsys):
    assert cli.main(["eval", "phi", "0.4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["modulus"] - 1) < 1e-12


def test_eval_kernel_on_circle(capsys):
    assert cli.main(["eval", "kernel", "0.5,1", "1.0,2", "--group", "circle-z"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["modulus"] - 1) < 1e-12


def test_free_energy_symmetric_point(capsys):
    assert cli.main(["free-energy", "--sides", "1.5707963267948966"] + ["1.5707963267948966"] * 2) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(abs(b - 0.7853981633974483) < 1e-12 for b in doc["betas"])


def test_degenerate_triangle_exits_1():
    assert cli.main(["free-energy", "--thetas", "0", "1", "1"]) == 1
