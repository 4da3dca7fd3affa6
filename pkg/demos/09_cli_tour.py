"""End-to-end command line usage: generate, evaluate, minimize, persist.

Every subcommand takes --config (inline JSON or a path), plus --seed,
--trials, --out overrides.  Exit code 0 is success, 2 flags bad inputs or
configs, 3 flags violated numeric contracts.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = [sys.executable, "-m", "polycond.cli"]


def run(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([*CLI, *args], capture_output=True, text=True)


with tempfile.TemporaryDirectory() as tmp_str:
    tmp = Path(tmp_str)

    # gen: sample a coefficient tensor and write it to disk
    gen_cfg = json.dumps({"shape": {"n": 4, "d": 2}, "dist": {"kind": "gaussian"}, "seeds": 5})
    sys_path = tmp / "system.json"
    out = run("gen", "--config", gen_cfg, "--out", str(sys_path))
    print("gen: exit", out.returncode, "| wrote", sys_path.name)

    # eval: apply the stored system at a point
    out = run("eval", "--config", json.dumps({"system": str(sys_path), "x": [1.0, 0.0, 0.0, 0.0]}))
    print("eval: f(e_1) =", [round(v, 4) for v in json.loads(out.stdout)["value"]])

    # lmin: minimize L and report the witness pair
    out = run("lmin", "--config", json.dumps(
        {"system": str(sys_path), "restarts": 5, "max_iters": 80, "newton_scans": 2}),
        "--seed", "4")
    res = json.loads(out.stdout)
    print("lmin: value =", f"{res['value']:.6f}", "| converged =", res["converged"])

    # cond: condition numbers at a point
    out = run("cond", "--config", json.dumps({"system": str(sys_path), "x": [0.0, 1.0, 0.0, 0.0]}))
    rep = json.loads(out.stdout)
    print("cond: mu1 =", f"{rep['mu1']:.3f}", "| mu2 =", f"{rep['mu2']:.3f}")

    # tail: a small tail-curve artifact with CSV + sidecar
    tail_cfg = {
        "shape": {"n": 3, "d": 2},
        "dist": {"kind": "gaussian"},
        "seeds": 8,
        "trials": 25,
        "eps_grid": [1e-2, 1e-1, 1.0],
        "restarts": 2,
        "max_iters": 60,
        "newton_scans": 2,
    }
    csv_path = tmp / "tail.csv"
    out = run("tail", "--config", json.dumps(tail_cfg), "--out", str(csv_path))
    sidecar = csv_path.with_name(csv_path.name + ".json")
    print("tail: exit", out.returncode, "| wrote", csv_path.name, "+", sidecar.name)
    print("  CSV header:", csv_path.read_text().splitlines()[0])

    # report-data: a directory of artifacts plus a manifest for rendering
    data_dir = tmp / "report_data"
    battery = {"experiments": [{"name": "tail_small", "kind": "tail", "config": tail_cfg}]}
    out = run("report-data", "--config", json.dumps(battery), "--out", str(data_dir))
    manifest = json.loads((data_dir / "manifest.json").read_text())
    print("report-data: artifacts =",
          [(a["name"], a["kind"]) for a in manifest["artifacts"]])

    # failure modes are distinguishable by exit code
    bad = run("tail", "--config", json.dumps({**tail_cfg, "trials": 0}))
    print("\nbad config (trials = 0): exit", bad.returncode,
          "|", bad.stderr.strip().splitlines()[-1])
    viol = run("cond", "--config", json.dumps({"system": str(sys_path), "x": [2.0, 0.0, 0.0, 0.0]}))
    print("contract violation (non-unit x): exit", viol.returncode,
          "|", viol.stderr.strip().splitlines()[-1])
