import json
import math
import os
import subprocess

import numpy as np
import pytest

import pfmcl

SMALL = {"preset": "relaxation", "nx": 25, "ny": 9, "dt": 0.02, "t_max": 0.1}


def test_presets_and_keys():
    names = pfmcl.preset_names()
    for n in ("default", "relaxation", "case1", "case2", "drop", "iterations", "steady"):
        assert n in names
    assert "theta_s_deg" in pfmcl.config_keys()
    cfg = pfmcl.resolve_config({"preset": "case2", "dt": 0.005})
    assert cfg["scheme"] == "bdf2"
    assert float(cfg["dt"]) == 0.005


def test_bad_config_raises():
    with pytest.raises(pfmcl.ConfigError):
        pfmcl.resolve_config({"scheme": "euler"})
    with pytest.raises(ValueError):
        pfmcl.Simulation({"nx": 10})


def test_simulation_arrays_and_energy():
    sim = pfmcl.Simulation(SMALL)
    assert sim.phi.shape == (9, 25)
    assert len(sim.x) == 25 and len(sim.y) == 9
    assert np.all(np.diff(sim.y) > 0)
    sim.step(sim.remaining_steps())
    assert sim.step_count == 5
    assert math.isclose(sim.t, 0.1)
    rec = sim.records
    assert len(rec) == 6
    e = [r["E_ieq"] for r in rec]
    assert all(b <= a + 1e-10 * abs(e[0]) for a, b in zip(e, e[1:]))
    assert abs(rec[-1]["volume"] - rec[0]["volume"]) < 1e-12
    assert np.max(np.abs(sim.uy[0])) == 0.0 and np.max(np.abs(sim.uy[-1])) == 0.0


def test_run_writes_outputs(tmp_path):
    out = pfmcl.run(dict(SMALL, out=str(tmp_path), scheme="cn"))
    assert out["steps"] == 5
    lines = (tmp_path / "timeseries.csv").read_text().splitlines()
    assert lines[0] == pfmcl.csv_header()
    assert len(lines) == 7
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["steps"] == 5


def test_checkpoint_restart(tmp_path):
    sim = pfmcl.Simulation(SMALL)
    sim.step(2)
    ck = tmp_path / "s.ckpt"
    sim.save_checkpoint(str(ck))
    sim.step(3)
    resumed = pfmcl.Simulation(dict(SMALL, restart=str(ck)))
    assert resumed.step_count == 2
    resumed.step(3)
    assert np.max(np.abs(resumed.phi - sim.phi)) <= 1e-12
    ck.write_bytes(b"garbage")
    with pytest.raises(pfmcl.FormatError):
        pfmcl.Simulation(dict(SMALL, restart=str(ck)))


CLI = os.environ.get("PFMCL_CLI")


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
def test_cli_invalid_scheme_reports_json():
    p = subprocess.run([CLI, "run", "--scheme", "rk4"], capture_output=True, text=True)
    assert p.returncode == 2
    err = json.loads(p.stderr.strip().splitlines()[-1])
    assert err["error"] == "config"
    assert "rk4" in err["message"]


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
def test_cli_run_steady(tmp_path):
    p = subprocess.run(
        [CLI, "run", "--preset", "steady", "--tmax", "0.05", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert p.returncode == 0, p.stderr
    assert (tmp_path / "params.txt").exists()
    assert "preset = steady" in (tmp_path / "params.txt").read_text()


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
def test_cli_bad_checkpoint_is_format_error(tmp_path):
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"PFMCLCKP")
    p = subprocess.run([CLI, "run", "--preset", "steady", "--set", f"restart={bad}"],
                       capture_output=True, text=True)
    assert p.returncode == 4
    assert json.loads(p.stderr.strip().splitlines()[-1])["error"] == "format"
