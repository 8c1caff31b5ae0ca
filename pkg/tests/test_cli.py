import json

import pandas as pd
import pytest
import yaml

from src import settings
from src.engine.gibbs import GibbsSampler
from src.main import main
from src.services import estimation_service
from src.storage.draws_codec import read_draws


@pytest.fixture(autouse=True)
def quiet(monkeypatch, tmp_path):
    monkeypatch.setattr(settings, "SHOW_PROGRESS", False)
    monkeypatch.setattr(settings, "RUNS_DIR", str(tmp_path / "runs"))


def _config(tmp_path, **overrides):
    payload = {
        "simulation": {"T": 90, "seed": 4, "truth": {"n_other": 1, "r": 3, "p": 1}, "output_dir": str(tmp_path / "data")},
        "scheme": "default",
        "model": {"p": 1, "r": 3, "draws": 60, "burn": 10, "seed": 2},
        "analysis": {"H": 6},
        "run_dir": str(tmp_path / "run"),
    }
    payload.update(overrides)
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    return str(path)


def test_full_pipeline(tmp_path, capsys):
    config = _config(tmp_path)
    assert main(["simulate", "--config", config]) == 0
    data = tmp_path / "data"
    assert {p.name for p in data.iterdir()} == {"dataset.csv", "schema.json", "truth.json"}
    summary = json.loads(capsys.readouterr().out)
    assert summary["n"] == 8

    assert main(["estimate", "--config", config]) == 0
    run = tmp_path / "run"
    for name in ("spec.json", "draws.bin", "diagnostics.csv", "log.txt"):
        assert (run / name).exists(), name
    assert read_draws(run / "draws.bin").count == 60
    spec = json.loads((run / "spec.json").read_text(encoding="utf-8"))
    assert spec["model"]["seed"] == 2

    assert main(["irf", "--config", config, "--units", "original"]) == 0
    target = pd.read_csv(run / "irf_Target.csv")
    assert len(target) == 7 * 10
    assert (run / "irf_Residual1.csv").exists()
    assert json.loads((run / "irf.json").read_text(encoding="utf-8"))["metadata"]["units"] == "original"

    assert main(["diagnose", "--config", config]) == 0
    assert "effective sample size" in (run / "diagnostics_report.txt").read_text(encoding="utf-8")

    assert main(["export", "--config", config, "--output", str(tmp_path / "out")]) == 0
    dump = pd.read_csv(tmp_path / "out" / "draws.csv")
    assert list(dump.columns) == ["chain", "draw", "parameter", "index", "value"]
    assert set(dump["parameter"]) >= {"phi", "gamma", "lambda", "factors"}
    assert (tmp_path / "out" / "factors.csv").exists()


def test_seed_override_reproduces_bytes(tmp_path):
    config = _config(tmp_path, model={"p": 1, "r": 3, "draws": 5, "burn": 2, "seed": 0})
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config, "--seed", "9", "--run-dir", str(tmp_path / "a")]) == 0
    assert main(["estimate", "--config", config, "--seed", "9", "--run-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "draws.bin").read_bytes() == (tmp_path / "b" / "draws.bin").read_bytes()


def test_zero_length_simulation_writes_nothing(tmp_path):
    config = _config(tmp_path, simulation={"T": 0, "output_dir": str(tmp_path / "data")})
    assert main(["simulate", "--config", config]) == 2
    assert not (tmp_path / "data").exists()


def test_strict_refuses_short_panel(tmp_path):
    config = _config(tmp_path, model={"p": 9, "r": 3, "draws": 5, "burn": 0})
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config, "--strict"]) == 2


def test_missing_data_is_io_failure(tmp_path):
    config = _config(tmp_path)
    assert main(["estimate", "--config", config]) == 4


def test_irf_on_empty_run_dir(tmp_path):
    config = _config(tmp_path)
    (tmp_path / "run").mkdir()
    assert main(["irf", "--config", config]) == 4


def test_irf_needs_enough_draws(tmp_path):
    config = _config(tmp_path, model={"p": 1, "r": 3, "draws": 10, "burn": 0})
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config]) == 0
    assert main(["irf", "--config", config]) == 2


def test_interrupted_estimate(tmp_path, monkeypatch):
    config = _config(tmp_path)
    assert main(["simulate", "--config", config]) == 0
    original = GibbsSampler.sweep

    def sweep(self):
        if self.iteration == 30:
            raise KeyboardInterrupt
        original(self)

    monkeypatch.setattr(GibbsSampler, "sweep", sweep)
    assert main(["estimate", "--config", config]) == 130
    draws = read_draws(tmp_path / "run" / "draws.bin")
    assert draws.truncated and draws.count == 20
    assert main(["irf", "--config", config]) == 4
    # 20 draws is below the IRF minimum even when truncated draws are allowed
    assert main(["irf", "--config", config, "--allow-truncated"]) == 2
    assert main(["diagnose", "--config", config]) == 0


def test_relative_run_dir_lands_under_runs_root(tmp_path):
    config = _config(tmp_path, run_dir="rel", model={"p": 1, "r": 3, "draws": 3, "burn": 0})
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config]) == 0
    assert (tmp_path / "runs" / "rel" / "draws.bin").exists()


def test_two_chains(tmp_path):
    config = _config(tmp_path, model={"p": 1, "r": 3, "draws": 30, "burn": 5, "seed": 3})
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config, "--chains", "2"]) == 0
    run = tmp_path / "run"
    specs = [json.loads((run / f"chain_{k}" / "spec.json").read_text(encoding="utf-8")) for k in range(2)]
    assert [s["model"]["seed"] for s in specs] == [3, 4]
    # pooled chains clear the IRF minimum together
    assert main(["irf", "--config", config]) == 0
    assert main(["diagnose", "--config", config]) == 0


def test_interrupted_multi_chain_estimate_keeps_every_chain(tmp_path, monkeypatch):
    config = _config(tmp_path, model={"p": 1, "r": 3, "draws": 100000, "burn": 0, "seed": 5})
    assert main(["simulate", "--config", config]) == 0

    def interrupted_wait(futures, *args, **kwargs):
        raise KeyboardInterrupt

    monkeypatch.setattr(estimation_service, "wait", interrupted_wait)
    assert main(["estimate", "--config", config, "--chains", "2"]) == 130
    for k in range(2):
        draws = read_draws(tmp_path / "run" / f"chain_{k}" / "draws.bin")
        assert draws.truncated
        assert 1 <= draws.count < 100000
    assert main(["irf", "--config", config]) == 4


def test_irf_shock_and_time_overrides(tmp_path):
    config = _config(tmp_path)
    assert main(["simulate", "--config", config]) == 0
    assert main(["estimate", "--config", config]) == 0
    assert main(["irf", "--config", config, "--shocks", "Target"]) == 0
    run = tmp_path / "run"
    assert (run / "irf_Target.csv").exists()
    assert not (run / "irf_Path.csv").exists()
    assert json.loads((run / "irf.json").read_text(encoding="utf-8"))["metadata"]["shocks"] == ["Target"]
    # time-varying responses need a run with time-varying loadings
    assert main(["irf", "--config", config, "--times", "2"]) == 2
