import os

from dagster import ConfigurableResource

from src import settings
from src.storage.run_store import RunStore


class RunStoreResource(ConfigurableResource):
    root: str = os.getenv("BVAR_RUNS_DIR", settings.RUNS_DIR)

    def get_store(self) -> RunStore:
        return RunStore(root=self.root)
