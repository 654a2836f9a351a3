import json

import numpy as np
import pytest

from qcmap.cli import main


def run_cli(*args):
    return main(list(args))


def test_transform_disc(tmp_path):
    cfg = {
        "operator": "beurling",
        "input": {"domain": {"shape": "disc", "center": [0, 0], "radius": 1.0}, "indicator": "spectral"},
        "grid": {"center": [0, 0], "half_width": 8.0, "n": 256},
        "probes": 8,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert run_cli("transform", "--config", str(cfg_path), "--out", str(out)) == 0
    assert (out / "output.csv").exists() and (out / "output.json").exists()
    svg = (out / "output_magnitude.svg").read_text()
    assert svg.startswith("<svg") and "base64" in svg
    rows = (out / "oracle_comparison.csv").read_text().strip().splitlines()
    assert rows[0].startswith("probe_re")
    rel = [float(r.split(",")[-1]) for r in rows[1:]]
    assert max(rel) <= 0.02


def test_transform_zero_field(tmp_path):
    cfg = {
        "operator": "beurling",
        "input": {"domain": {"shape": "disc", "center": [30, 30], "radius": 0.1}, "indicator": "center"},
        "grid": {"half_width": 4.0, "n": 128},
        "oracle": "none",
    }
    # a domain outside the box samples to the zero field: output all zeros
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert run_cli("transform", "--config", str(cfg_path), "--out", str(out)) == 0
    raw = np.loadtxt(out / "output.csv", delimiter=",")
    assert np.max(np.abs(raw)) == 0.0


def test_transform_square_vs_pv_oracle(tmp_path):
    cfg = {
        "operator": "beurling",
        "input": {"domain": {"shape": "square", "center": [0, 0], "side": 2.0}, "indicator": "spectral"},
        "grid": {"center": [0, 0], "half_width": 8.0, "n": 256},
        "probes": 4,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert run_cli("transform", "--config", str(cfg_path), "--out", str(out)) == 0
    rows = (out / "oracle_comparison.csv").read_text().strip().splitlines()[1:]
    assert rows
    rel = [float(r.split(",")[-1]) for r in rows]
    assert max(rel) <= 0.05


def test_verify_reports_check_failure(tmp_path, monkeypatch):
    from qcmap import verify as verify_mod

    def failing_recipe(seed=0, quick=False):
        return [{"name": "always-fails", "value": 1.0, "threshold": "0", "passed": False, "hard": True}]

    monkeypatch.setitem(verify_mod.RECIPES, "failing", failing_recipe)
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "failing"}))
    assert run_cli("verify", "--config", str(cfg_path), "--out", str(tmp_path / "v")) == 1


def test_sweep_square_trace_reported(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "square-lower-trace", "sizes": [128, 256], "lambda": 0.9}))
    out = tmp_path / "sweep"
    assert run_cli("sweep", "--config", str(cfg_path), "--out", str(out)) == 0
    rows = (out / "trace.csv").read_text().strip().splitlines()[1:]
    vals = [float(r.split(",")[1]) for r in rows]
    assert vals[1] < vals[0]  # shrinking lower constant, emitted as a trace


def test_solve_command(tmp_path):
    problem = {
        "grid": {"center": [0, 0], "half_width": 4.0, "n": 128},
        "parts": [{"domain": {"shape": "disc", "center": [0, 0], "radius": 1.0}, "value": [0.5, 0.0]}],
    }
    cfg_path = tmp_path / "problem.json"
    cfg_path.write_text(json.dumps(problem))
    out = tmp_path / "sol"
    assert run_cli("solve", "--config", str(cfg_path), "--out", str(out)) == 0
    diag = json.loads((out / "diagnostics.json").read_text())
    assert diag["residual"] <= 1e-6
    assert (out / "h.csv").exists()


def test_verify_pass_and_exit_codes(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "mori-identity", "quick": True}))
    out = tmp_path / "v"
    assert run_cli("verify", "--config", str(cfg_path), "--out", str(out)) == 0
    verdict = json.loads((out / "verdict.json").read_text())
    assert verdict["passed"] is True


def test_verify_unknown_recipe(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "no-such-thing"}))
    assert run_cli("verify", "--config", str(cfg_path), "--out", str(tmp_path / "v")) == 2


def test_missing_config_is_config_error(tmp_path):
    assert run_cli("verify", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path)) == 2


def test_verify_determinism(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "bn-consistency", "quick": True}))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli("verify", "--config", str(cfg_path), "--out", str(out1), "--seed", "7") == 0
    assert run_cli("verify", "--config", str(cfg_path), "--out", str(out2), "--seed", "7") == 0
    assert (out1 / "verdict.json").read_bytes() == (out2 / "verdict.json").read_bytes()


def test_sweep_disc_trace(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "disc-lower-trace", "sizes": [128, 256], "lambda": 0.5}))
    out = tmp_path / "sweep"
    assert run_cli("sweep", "--config", str(cfg_path), "--out", str(out)) == 0
    rows = (out / "trace.csv").read_text().strip().splitlines()
    assert rows[0] == "n,value" and len(rows) == 3
    summary = json.loads((out / "summary.json").read_text())
    assert summary["growth_flagged"] is False
    assert (out / "trace.svg").read_text().startswith("<svg")


def test_sweep_cusp_trace_flags_growth(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "cusp-seminorm-trace", "sizes": [128, 256, 512], "eps": 0.75}))
    out = tmp_path / "sweep"
    assert run_cli("sweep", "--config", str(cfg_path), "--out", str(out)) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["growth_flagged"] is True


def test_sweep_unknown_recipe(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"recipe": "bogus"}))
    assert run_cli("sweep", "--config", str(cfg_path), "--out", str(tmp_path / "s")) == 2
