import csv
import io
import json
import subprocess
import sys

import pytest

from todalab.harness import SYSTEM_SPECS, ConfigError, RunConfig, main, run_verify


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _strip_timing(report):
    report = dict(report)
    report.pop("timing")
    return report


# verify -----------------------------------------------------------------------------

def test_verify_pass_writes_schema_report(capsys):
    code, out, _ = _run(capsys, "verify", "--system", "classical", "--N", "3", "--checks", "jacobi,casimirs", "--samples", "5")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1 and rep["verdict"] == "pass"
    assert rep["config"]["checks"] == ["jacobi", "casimirs"] and rep["config"]["dim"] == 3
    for c in rep["checks"]:
        assert {"name", "samples", "seed", "mode", "max_residual", "verdict"} <= set(c)
        assert c["samples"] == 5
    assert [t["check"] for t in rep["timing"]] == ["jacobi", "casimirs"]


def test_verify_failing_literal_check_exits_one(capsys):
    code, out, _ = _run(capsys, "verify", "--system", "bn", "--n", "2", "--checks", "pinv-printed", "--samples", "5")
    assert code == 1
    rep = json.loads(out)
    assert rep["verdict"] == "fail"
    assert any(c["verdict"] == "fail" and "witness" in c for c in rep["checks"])


def test_literal_checks_are_not_in_all():
    spec = SYSTEM_SPECS["classical"]
    chosen = [c.name for c in spec.select("all", 3)]
    assert "symmetry-printed" not in chosen and "jacobi" in chosen


def test_controls_pass_when_broken_objects_fail(capsys):
    code, out, _ = _run(capsys, "verify", "--system", "classical", "--N", "3", "--checks", "controls", "--samples", "5")
    assert code == 0
    rep = json.loads(out)
    assert all(c["name"].startswith("control:") for c in rep["checks"])
    assert all(c["max_residual"] != 0 for c in rep["checks"])


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["verify", "--system", "classical", "--checks", "nope"], "jacobi"),
        (["verify", "--system", "toda9"], "invalid choice"),
        (["verify", "--system", "classical", "--checks", ","], "no checks selected"),
        (["verify", "--system", "classical", "--samples", "0"], "samples"),
        (["verify", "--system", "classical", "--mode", "float", "--tol", "0"], "tolerance"),
        (["verify", "--system", "classical", "--N", "3", "--n", "3"], "only one"),
        (["verify", "--system", "classical", "--N", "1"], "N"),
        (["verify"], "--system is required"),
        (["integrate", "--system", "classical", "--step", "0"], "step must be > 0"),
        (["integrate", "--system", "classical", "--step", "-1"], "step must be > 0"),
        (["integrate", "--system", "classical", "--N", "3", "--point", "1,2"], "point needs 5"),
        (["table", "--system", "classical", "--bracket", "9"], "valid indices"),
        (["table", "--system", "relativistic", "--N", "3", "--bracket", "4"], "valid indices"),
    ],
)
def test_config_errors_exit_two(capsys, argv, needle):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert needle in err


def test_lie_catalog_accepts_labels(capsys):
    code, out, _ = _run(capsys, "verify", "--system", "lie-catalog", "--rank", "B3", "--checks", "energy", "--samples", "3")
    assert code == 0
    assert json.loads(out)["config"]["dim"] == "B3"


def test_report_is_deterministic_apart_from_timing(capsys):
    argv = ["verify", "--system", "relativistic", "--N", "3", "--checks", "jacobi,lenard", "--samples", "5", "--seed", "7"]
    _, a, _ = _run(capsys, *argv)
    _, b, _ = _run(capsys, *argv)
    assert _strip_timing(json.loads(a)) == _strip_timing(json.loads(b))
    ja, jb = json.loads(a), json.loads(b)
    assert json.dumps(_strip_timing(ja), indent=2) == json.dumps(_strip_timing(jb), indent=2)


def test_seed_changes_report(capsys):
    base = ["verify", "--system", "classical", "--N", "3", "--checks", "jacobi", "--samples", "3"]
    _, a, _ = _run(capsys, *base, "--seed", "1")
    _, b, _ = _run(capsys, *base, "--seed", "2")
    assert json.loads(a)["checks"][0]["seed"] == 1 and json.loads(b)["checks"][0]["seed"] == 2


def test_seed_env_default(capsys, monkeypatch):
    monkeypatch.setenv("TODA_LAB_SEED", "99")
    _, out, _ = _run(capsys, "verify", "--system", "classical", "--N", "2", "--checks", "jacobi", "--samples", "2")
    assert json.loads(out)["config"]["seed"] == 99


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"system": "bn", "n": 2, "checks": ["jacobi"], "samples": 4, "seed": 3}))
    code, out, _ = _run(capsys, "verify", "--config", str(cfg), "--samples", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["samples"] == 2 and rep["config"]["seed"] == 3 and rep["config"]["system"] == "bn"


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"system": "bn", "colour": "red"}))
    code, _, err = _run(capsys, "verify", "--config", str(bad))
    assert code == 2 and "unknown config keys" in err
    code, _, err = _run(capsys, "verify", "--config", str(tmp_path / "missing.json"))
    assert code == 2


def test_out_file_and_summary(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, err = _run(capsys, "verify", "--system", "kostant", "--n", "3", "--checks", "flow", "--samples", "3", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["verdict"] == "pass"
    assert err.startswith("pass:")


def test_jobs_keep_declared_order():
    cfg = dict(system="classical", dim=3, checks=["casimirs", "jacobi", "involution"], samples=3, seed=5)
    a = run_verify(RunConfig(**cfg))
    b = run_verify(RunConfig(**cfg, jobs=2))
    assert _strip_timing(a) == _strip_timing(b)
    assert [t["check"] for t in b["timing"]] == ["casimirs", "jacobi", "involution"]


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(system="classical", jobs=0)
    assert RunConfig(system="classical", checks="a, b").checks == ["a", "b"]


def test_list_checks(capsys):
    code, out, _ = _run(capsys, "verify", "--system", "bn", "--list")
    assert code == 0
    assert "pinv-printed" in out and "literal" in out


# integrate -----------------------------------------------------------------------------

def test_integrate_csv_and_drift(tmp_path, capsys):
    path = tmp_path / "traj.csv"
    code, _, _ = _run(capsys, "integrate", "--system", "classical", "--N", "3", "--t-end", "1", "--step", "0.01",
                      "--seed", "4", "--out", str(path), "--tol", "1e-8")
    assert code == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["t", "a1", "a2", "b1", "b2", "b3"] and len(rows) == 102
    drift = json.loads((tmp_path / "traj.drift.json").read_text())
    assert drift["verdict"] == "pass" and drift["drift"]["max_drift"] <= 1e-8
    assert [e["name"] for e in drift["drift"]["invariants"]][:3] == ["H1", "H2", "H3"]


def test_integrate_stdout_with_point(capsys):
    code, out, err = _run(capsys, "integrate", "--system", "bn", "--n", "2", "--point", "0.5,0.4,0.1,-0.2",
                          "--t-end", "0.01", "--step", "0.005", "--halve")
    assert code == 0
    assert out.splitlines()[0] == "t,a1,a2,b1,b2"
    rep = json.loads(err)
    assert rep["config"]["point"] == [0.5, 0.4, 0.1, -0.2] and "richardson_error" in rep


def test_integrate_kostant_reports_rational_drift(tmp_path, capsys):
    drift = tmp_path / "d.json"
    code, _, _ = _run(capsys, "integrate", "--system", "kostant", "--n", "4", "--t-end", "1", "--step", "0.01",
                      "--drift-out", str(drift), "--out", str(tmp_path / "t.csv"))
    assert code == 0
    names = [e["name"] for e in json.loads(drift.read_text())["drift"]["invariants"]]
    assert "I21" in names and "I11" in names


def test_integrate_tolerance_failure(capsys):
    code, _, err = _run(capsys, "integrate", "--system", "classical", "--N", "3", "--t-end", "0.5", "--step", "0.25", "--tol", "1e-16")
    assert code == 1
    assert json.loads(err)["verdict"] == "fail"


def test_integrate_singular_point(capsys):
    code, _, err = _run(capsys, "integrate", "--system", "kostant", "--n", "4", "--point", "1,1,1,1,1,1,1,0,0,0")
    assert code == 2 and "singular" in err


# table -------------------------------------------------------------------------------

def test_table_classical_pi2(capsys):
    code, out, _ = _run(capsys, "table", "--system", "classical", "--N", "3", "--bracket", "2")
    assert code == 0
    entries = {(e["i"], e["j"]): e["poly"] for e in json.loads(out)["entries"]}
    assert entries[("a1", "a2")] == "1/2*a1*a2"
    assert entries[("b1", "b2")] == "2*a1**2"


def test_table_b2_and_point(capsys):
    code, out, _ = _run(capsys, "table", "--system", "bn", "--n", "2", "--bracket", "rational")
    assert code == 0 and len(json.loads(out)["entries"]) == 10
    code, out, _ = _run(capsys, "table", "--system", "bn", "--n", "2", "--bracket", "rational", "--point", "1,1,1,1,1")
    assert code == 0
    code, _, err = _run(capsys, "table", "--system", "bn", "--n", "2", "--bracket", "rational", "--point", "1,1,1,1,0")
    assert code == 2


def test_table_kostant_rational(capsys):
    code, out, _ = _run(capsys, "table", "--system", "kostant", "--n", "4", "--bracket", "rational", "--point", "1,2,3,4,1,1,1,1,1,2")
    assert code == 0
    assert json.loads(out)["invariants"][-1]["denominator"] == "2"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "todalab", "table", "--system", "classical", "--N", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["bracket"] == 1
