from typing import Any, Dict

from dagster import AssetExecutionContext, asset

from src.ingestion.assets import RunConfigFile, resolve_run_config
from src.services.analysis_service import write_diagnostics, write_irfs
from src.storage.dagster_resources import RunStoreResource


@asset
def impulse_responses(
    context: AssetExecutionContext,
    config: RunConfigFile,
    posterior_draws: Dict[str, Any],
    run_store: RunStoreResource,
) -> Dict[str, str]:
    run_config = resolve_run_config(config)
    store = run_store.get_store()
    written = write_irfs(store, posterior_draws["run_dir"], run_config.analysis)
    context.log.info(f"Wrote {len(written)} IRF files for shocks {run_config.analysis.shocks or 'all'}")
    return {k: str(v) for k, v in written.items()}


@asset
def chain_diagnostics(
    context: AssetExecutionContext,
    posterior_draws: Dict[str, Any],
    run_store: RunStoreResource,
) -> Dict[str, Any]:
    report = write_diagnostics(run_store.get_store(), posterior_draws["run_dir"])
    context.log.info(f"Explosive draw share {report.explosive_share:.4f}")
    if not report.rhat.empty:
        context.log.info(f"Largest split R-hat on identified loadings: {report.rhat['rhat'].max():.3f}")
    return {
        "explosive_share": report.explosive_share,
        "chains": report.chains,
        "draws_per_chain": report.draws_per_chain,
        "max_rhat": None if report.rhat.empty else float(report.rhat["rhat"].max()),
    }
