import json
import subprocess
import sys
from pathlib import Path

import pytest

from barrierflow.cli import main

CONFIGS = Path(__file__).parent.parent / "configs"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_attractor_report_and_determinism(tmp_path, capsys):
    cfg = CONFIGS / "l_surface_b1_4.json"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["attractor", "--config", cfg, "--report", a, "--cross-check", "--minimality"], capsys)[0] == 0
    assert run(["attractor", "--config", cfg, "--report", b, "--cross-check", "--minimality"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["results"]["area_R"]["rat"] == "2"
    assert rep["results"]["minimality"]["minimal"] is True
    assert rep["verification"]["cross_check_equal"]
    assert len(rep["instance"]["digest"]) == 64


def test_attractor_to_stdout_with_svg(tmp_path, capsys):
    svg = tmp_path / "r.svg"
    code, out, _ = run(["attractor", "--config", CONFIGS / "two_square_torus.json", "--svg", svg], capsys)
    assert code == 0
    assert json.loads(out)["artifacts"]["svg"] == str(svg)
    assert "<svg" in svg.read_text()


def test_verify_round_trip_and_failure(tmp_path, capsys):
    cfg = CONFIGS / "l_surface_b4_5.json"
    code, out, _ = run(["attractor", "--config", cfg], capsys)
    regions = json.loads(out)["regions"]
    r, w = tmp_path / "r.json", tmp_path / "w.json"
    r.write_text(json.dumps(regions["R"]))
    w.write_text(json.dumps(regions["W"]))
    code, out, _ = run(["verify", "--config", cfg, "--recurrent", r, "--transient", w], capsys)
    assert code == 0 and all(json.loads(out)["verification"].values())
    # swapping the two sets breaks invariance
    code, out, _ = run(["verify", "--config", cfg, "--recurrent", w, "--transient", r], capsys)
    assert code == 3
    assert not json.loads(out)["verification"]["recurrent_invariant"]


def test_exit_code_for_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"squares": 2, "right": [1, 0]}')
    code, _, err = run(["attractor", "--config", bad], capsys)
    assert code == 1 and "error" in err
    code, _, _ = run(["attractor", "--config", tmp_path / "missing.json"], capsys)
    assert code == 1
    code, _, _ = run(["small-attractor", "--alpha", "{not json", "--n", "25", "--k", "3"], capsys)
    assert code == 1


def test_exit_code_for_caps(capsys):
    code, _, err = run(["attractor", "--config", CONFIGS / "l_surface_b4_5.json", "--round-cap", "1"], capsys)
    assert code == 2 and "cap" in err


def test_exit_code_for_failed_construction(capsys):
    alpha = json.dumps({"surd": {"p": 0, "q": 1, "d": 2, "r": 2}})
    code, _, _ = run(["small-attractor", "--alpha", alpha, "--n", "25", "--k", "2"], capsys)
    assert code == 1


def test_small_attractor_command(capsys):
    alpha = json.dumps({"surd": {"p": -301, "q": 1, "d": 93021, "r": 10}})
    code, out, _ = run(["small-attractor", "--alpha", alpha, "--n", "25", "--k", "3"], capsys)
    assert code == 0
    cert = json.loads(out)["certificate"]
    assert all(cert["checks"].values())
    assert cert["q_next"] == 303


def test_bk_demo(capsys):
    code, out, _ = run(["bk-demo", "--levels", "4"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["induced"]["I1"]["conjugacy_exact"] and rep["induced"]["I2"]["matches_expected"]
    assert len(rep["decay"]) == 5


def test_simulate_reports_fraction_and_csv(tmp_path, capsys):
    csv = tmp_path / "t.csv"
    args = ["simulate", "--config", CONFIGS / "two_square_torus.json", "--trajectories", "50",
            "--steps", "20", "--warmup", "40", "--seed", "4", "--csv", csv]
    code, out, _ = run(args, capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["inside_R_fraction"] == pytest.approx(1.0)
    assert csv.read_text().startswith("step,square,y")
    code2, out2, _ = run(args, capsys)
    assert out2 == out


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "barrierflow.cli", "bk-demo", "--levels", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["command"] == "bk-demo"
