"""End-to-end CLI behavior: subcommands, overrides, and exit codes."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from polycond import SeedPolicy, evaluate, l_min, load_system, read_outputs
from polycond.cli import main


def run(*argv) -> int:
    return main(list(argv))


def tail_config(**overrides) -> dict:
    base = {
        "shape": {"n": 3, "d": 2},
        "dist": {"kind": "gaussian"},
        "seeds": 3,
        "trials": 5,
        "eps_grid": [1e-3, 100.0],
        "restarts": 2,
        "max_iters": 40,
        "newton_scans": 1,
    }
    base.update(overrides)
    return base


def test_gen_eval_lmin_cond_pipeline(tmp_path, capsys):
    sys_path = tmp_path / "system.json"
    gen_cfg = json.dumps({"shape": {"n": 4, "d": 2}, "seeds": 9})
    assert run("gen", "--config", gen_cfg, "--out", str(sys_path)) == 0
    system = load_system(sys_path)

    x = [1.0, 0.0, 0.0, 0.0]
    assert run("eval", "--config", json.dumps({"system": str(sys_path), "x": x})) == 0
    payload = json.loads(capsys.readouterr().out)
    assert np.allclose(payload["value"], evaluate(system, np.array(x)))

    lmin_cfg = json.dumps(
        {"system": str(sys_path), "restarts": 5, "max_iters": 80, "newton_scans": 2}
    )
    out_path = tmp_path / "lmin.json"
    assert run("lmin", "--config", lmin_cfg, "--seed", "4", "--out", str(out_path)) == 0
    got = json.loads(out_path.read_text())
    want = l_min(system, restarts=5, max_iters=80, seeds=SeedPolicy(4), newton_scans=2)
    assert got["value"] == want.value
    assert got["converged"] == want.converged

    xu = (np.array([1.0, 1.0, 0.0, 0.0]) / math.sqrt(2.0)).tolist()
    assert run("cond", "--config", json.dumps({"system": str(sys_path), "x": xu})) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {
        "mu1", "mu2", "mu1_infinite", "mu2_infinite", "sigma_min_tangent", "weyl_total",
    }
    assert rep["sigma_min_tangent"] > 0.0


def test_exit_code_2_paths(tmp_path, capsys):
    assert run("eval", "--config", json.dumps({"x": [1, 0, 0]})) == 2
    assert run("gen", "--config", json.dumps({"shape": {"n": 3, "d": 2}})) == 2
    assert run("lmin", "--config", "{not json") == 2
    assert run("lmin", "--config", str(tmp_path / "missing.json")) == 2
    assert run("tail", "--config", json.dumps(tail_config(trials=0)), "--out", str(tmp_path / "t.csv")) == 2
    assert run("tail", "--config", json.dumps(tail_config(surplus=1)), "--out", str(tmp_path / "t.csv")) == 2
    capsys.readouterr()


def test_exit_code_3_on_contract_violation(tmp_path, capsys):
    sys_path = tmp_path / "system.json"
    assert run("gen", "--config", json.dumps({"shape": {"n": 3, "d": 2}}), "--out", str(sys_path)) == 0
    bad_x = json.dumps({"system": str(sys_path), "x": [2.0, 0.0, 0.0]})
    assert run("cond", "--config", bad_x) == 3
    err = capsys.readouterr().err
    assert "contract violation" in err


def test_tail_artifact_and_overrides(tmp_path):
    out = tmp_path / "tail.csv"
    cfg = tail_config()
    assert run("tail", "--config", json.dumps(cfg), "--trials", "7", "--seed", "12", "--out", str(out)) == 0
    kind, columns, sidecar = read_outputs(out)
    assert kind == "tail"
    assert columns["trials"] == [7, 7]
    assert sidecar["config"]["trials"] == 7
    assert sidecar["config"]["seeds"] == {"master_seed": 12}

    other = tmp_path / "tail2.csv"
    assert run("tail", "--config", json.dumps(cfg), "--trials", "7", "--seed", "12",
               "--threads", "4", "--out", str(other)) == 0
    assert other.read_text() == out.read_text()


def test_lcd_stdout(capsys):
    cfg = json.dumps({"y": [1.0], "alpha": 0.4, "gamma0": 0.5, "d_max": 2.0})
    assert run("lcd", "--config", cfg) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["found"]
    assert payload["lcd"] == pytest.approx(2.0 / 3.0, abs=1e-4)
    assert payload["certificate"]["lattice_dist"] < payload["certificate"]["threshold"]

    derived = json.dumps({"y": [1.0, 0.0], "n": 8, "d": 2, "d_max": 0.4})
    assert run("lcd", "--config", derived) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["found"] is False
    assert payload["lcd"] is None


def test_opnorm_single_and_tensor_file(tmp_path, capsys):
    cfg = json.dumps({"shape": {"n": 5, "d": 2}, "seeds": 2, "restarts": 4})
    assert run("opnorm", "--config", cfg) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] > 0.0
    assert payload["unsquared"] == pytest.approx(math.sqrt(payload["value"]))
    assert len(payload["arg"]) == 2

    gen_cfg = json.dumps({"shape": {"n": 5, "d": 2}, "seeds": 2})
    sys_path = tmp_path / "sys.json"
    assert run("gen", "--config", gen_cfg, "--out", str(sys_path)) == 0


def test_opnorm_scaling_artifact(tmp_path):
    out = tmp_path / "scaling.csv"
    cfg = json.dumps({"mode": "scaling", "d": 2, "n_list": [4, 5], "trials": 2,
                      "seeds": 8, "restarts": 3})
    assert run("opnorm", "--config", cfg, "--out", str(out)) == 0
    kind, columns, sidecar = read_outputs(out)
    assert kind == "opnorm_scaling"
    assert columns["n"] == [4, 4, 5, 5]
    assert sidecar["metadata"]["n_list"] == [4, 5]


def test_example1_stdout_and_artifact(tmp_path, capsys):
    cfg = json.dumps({"n": 3, "seeds": 5})
    assert run("example1", "--config", cfg, "--trials", "2000") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["trials"] == 2000
    assert payload["exact_p_f_zero"] == (3.0 / 8.0) ** 2
    assert payload["p_joint"] <= payload["p_f_zero"]

    out = tmp_path / "ex1.csv"
    assert run("example1", "--config", cfg, "--trials", "2000", "--out", str(out)) == 0
    kind, columns, _ = read_outputs(out)
    assert kind == "example1"
    assert columns["quantity"] == ["p_f_zero", "p_joint"]


def test_corollary_and_compressible_artifacts(tmp_path):
    out = tmp_path / "events.csv"
    cfg = tail_config(scale=0.0, trials=2, eps_grid=[0.5, 1.0])
    assert run("corollary", "--config", json.dumps(cfg), "--out", str(out)) == 0
    kind, columns, _ = read_outputs(out)
    assert kind == "corollary_events"
    assert columns["estimate"] == [1.0] * 6

    out = tmp_path / "comp.csv"
    comp_cfg = tail_config(shape={"n": 6, "d": 2}, trials=3, delta=0.2, rho=0.2,
                           fixed_support=[0, 1])
    assert run("compressible", "--config", json.dumps(comp_cfg), "--out", str(out)) == 0
    kind, columns, sidecar = read_outputs(out)
    assert kind == "compressible"
    assert len(columns["trial"]) == 3
    assert sidecar["metadata"]["fixed_support"] == [0, 1]
    assert sidecar["metadata"]["delta"] == 0.2


def test_report_data_manifest(tmp_path):
    out_dir = tmp_path / "artifacts"
    experiments = [
        {"name": "tail_small", "kind": "tail", "config": tail_config()},
        {"name": "sb", "kind": "small_ball",
         "config": {"y": [1.0], "eps_grid": [0.1, 0.2], "trials": 10_000, "seeds": 4}},
        {"name": "scaling", "kind": "opnorm_scaling",
         "config": {"d": 2, "n_list": [4, 5], "trials": 2, "seeds": 8}},
        {"name": "ex1", "kind": "example1", "config": {"n": 3, "trials": 2000, "seeds": 5}},
        {"name": "tens", "kind": "tensorization",
         "config": {"n": 4, "delta_grid": [0.5, 1.0], "trials": 100_000, "seeds": 6}},
    ]
    cfg = json.dumps({"experiments": experiments})
    assert run("report-data", "--config", cfg, "--out", str(out_dir)) == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert [e["name"] for e in manifest["artifacts"]] == [e["name"] for e in experiments]
    for entry in manifest["artifacts"]:
        kind, _, sidecar = read_outputs(out_dir / entry["csv"])
        assert kind == entry["kind"]
        assert sidecar["columns"]

    bad = json.dumps({"experiments": [{"name": "x", "kind": "mystery", "config": {}}]})
    assert run("report-data", "--config", bad, "--out", str(out_dir)) == 2


def test_cli_help_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "polycond.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "polycond" in proc.stdout
    for name in ("gen", "lmin", "tail", "report-data"):
        assert name in proc.stdout
