from typing import Any, Dict

from dagster import AssetExecutionContext, asset

from src.ingestion.assets import RunConfigFile, resolve_run_config
from src.ingestion.models import Dataset
from src.services.estimation_service import estimate
from src.storage.dagster_resources import RunStoreResource


@asset
def posterior_draws(
    context: AssetExecutionContext,
    config: RunConfigFile,
    estimation_panel: Dataset,
    run_store: RunStoreResource,
) -> Dict[str, Any]:
    """Run the configured chains on the panel and persist them in the run store."""
    run_config = resolve_run_config(config)
    store = run_store.get_store()
    context.log.info(f"Estimating {run_config.chains} chain(s) into {store.resolve(run_config.run_dir)}")
    result = estimate(run_config, store, progress=False, ds=estimation_panel)
    summary = result.summary()
    if result.truncated:
        context.log.warning(f"Chains were interrupted: {summary}")
    context.log.info(f"Estimation summary: {summary}")
    return summary
