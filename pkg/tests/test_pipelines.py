import yaml
from dagster import materialize_to_memory

from src.analysis.assets import chain_diagnostics, impulse_responses
from src.engine.assets import posterior_draws
from src.ingestion.assets import estimation_panel
from src.pipelines.definitions import defs
from src.services.config import load_config
from src.services.estimation_service import simulate_to_disk
from src.storage.dagster_resources import RunStoreResource


def test_definitions_load():
    assert defs.get_job_def("estimate_job") is not None
    assert defs.get_job_def("analyze_job") is not None


def test_assets_materialize_end_to_end(tmp_path):
    payload = {
        "simulation": {"T": 80, "seed": 5, "truth": {"n_other": 1, "r": 3, "p": 1}, "output_dir": str(tmp_path / "data")},
        "model": {"p": 1, "r": 3, "draws": 50, "burn": 5, "seed": 1},
        "analysis": {"H": 4},
        "run_dir": "asset_run",
    }
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(payload), encoding="utf-8")
    simulate_to_disk(load_config(path))

    op_config = {"config": {"config_path": str(path)}}
    result = materialize_to_memory(
        [estimation_panel, posterior_draws, impulse_responses, chain_diagnostics],
        resources={"run_store": RunStoreResource(root=str(tmp_path / "runs"))},
        run_config={"ops": {name: op_config for name in ("estimation_panel", "posterior_draws", "impulse_responses")}},
    )
    assert result.success
    summary = result.output_for_node("posterior_draws")
    assert summary["stored_draws"] == [50]
    assert (tmp_path / "runs" / "asset_run" / "draws.bin").exists()
    written = result.output_for_node("impulse_responses")
    assert "irf_json" in written
    assert result.output_for_node("chain_diagnostics")["chains"] == 1
