from typing import Optional

from dagster import AssetExecutionContext, Config, MetadataValue, Output, asset

from src.ingestion.models import Dataset
from src.services.config import RunConfig, load_config
from src.services.estimation_service import prepare_dataset


class RunConfigFile(Config):
    """Points a materialization at a run config; the optional fields override it."""
    config_path: str
    run_dir: Optional[str] = None
    seed: Optional[int] = None
    chains: Optional[int] = None
    threads: Optional[int] = None


def resolve_run_config(config: RunConfigFile) -> RunConfig:
    run_config = load_config(config.config_path).with_overrides(seed=config.seed, chains=config.chains, threads=config.threads)
    if config.run_dir is not None:
        run_config = run_config.model_copy(update={"run_dir": config.run_dir})
    return run_config


@asset
def estimation_panel(context: AssetExecutionContext, config: RunConfigFile) -> Output[Dataset]:
    """
    Load the configured CSV and schema, apply the transformation codes,
    align the monthly sample and standardize.
    """
    run_config = resolve_run_config(config)
    context.log.info(f"Assembling panel from {run_config.data.csv}")
    ds = prepare_dataset(run_config)
    context.log.info(f"Panel {ds.dates[0]}..{ds.dates[-1]}: m={ds.m}, n={ds.n}, zero-filled instrument months {ds.zero_filled}")
    return Output(
        ds,
        metadata={
            "T": ds.T,
            "m": ds.m,
            "n": ds.n,
            "start": str(ds.dates[0]),
            "end": str(ds.dates[-1]),
            "variables": MetadataValue.json(ds.names),
        },
    )
