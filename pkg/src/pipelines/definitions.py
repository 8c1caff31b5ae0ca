from dotenv import load_dotenv
from dagster import Definitions, define_asset_job, load_assets_from_modules

# Load env vars from .env file if present
load_dotenv()

from src.analysis import assets as analysis_assets
from src.engine import assets as engine_assets
from src.ingestion import assets as ingestion_assets
from src.storage.dagster_resources import RunStoreResource

all_assets = load_assets_from_modules([ingestion_assets, engine_assets, analysis_assets])

# Panel assembly and sampling
estimate_job = define_asset_job(
    name="estimate_job",
    selection=["estimation_panel", "posterior_draws"],
)

# Summaries over the draws already in the run store
analyze_job = define_asset_job(
    name="analyze_job",
    selection=["impulse_responses", "chain_diagnostics"],
)

defs = Definitions(
    assets=all_assets,
    jobs=[estimate_job, analyze_job],
    resources={
        "run_store": RunStoreResource(),
    },
)
