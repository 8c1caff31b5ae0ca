"""Run configuration shared by the CLI and the dagster pipelines."""
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src import settings
from src.analysis.models import QUANTILE_LEVELS
from src.engine.models import MAX_SEED, Features, LagBlock
from src.synthetic.models import TruthSpec

DATASET_FILE = "dataset.csv"
SCHEMA_FILE = "schema.json"
TRUTH_FILE = "truth.json"


class DataConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    csv: str
    schema_path: str
    # Inclusive YYYY-MM bounds; inferred from the macro series when omitted
    sample: Optional[Tuple[str, str]] = None
    standardize: bool = True


class SimulationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    T: int = Field(default=400, gt=0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    truth: TruthSpec = TruthSpec()
    output_dir: str = "data/synthetic"


class SamplerConfig(BaseModel):
    """ModelSpec fields apart from the scheme, which is resolved against the data."""
    model_config = ConfigDict(extra="forbid")

    p: int = Field(gt=0)
    r: int = Field(gt=0)
    features: Features = Features()
    draws: int = Field(gt=0)
    burn: int = Field(ge=0)
    thin: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    lag_exclusions: List[LagBlock] = []
    phi_shrinkage: bool = True


class AnalysisConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    H: int = Field(default=24, ge=0)
    quantiles: List[float] = list(QUANTILE_LEVELS)
    # Shock labels or indices; every shock when omitted
    shocks: Optional[List[Union[str, int]]] = None
    # Periods (YYYY-MM or index into the estimation sample) for time-varying responses
    times: List[Union[str, int]] = []
    units: Literal["standardized", "original"] = "standardized"

    @field_validator("quantiles")
    @classmethod
    def _check_quantiles(cls, value: List[float]) -> List[float]:
        if not value or any(not 0.0 < q < 1.0 for q in value):
            raise ValueError("quantile levels must lie strictly between 0 and 1")
        if sorted(value) != value or len(set(value)) != len(value):
            raise ValueError("quantile levels must be strictly increasing")
        return value


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    data: Optional[DataConfig] = None
    simulation: Optional[SimulationConfig] = None
    # "default", "default-prose", "instruments-only" or a scheme file path
    scheme: str = "default"
    model: SamplerConfig
    analysis: AnalysisConfig = AnalysisConfig()
    run_dir: str = "run"
    chains: int = Field(default=1, ge=1)
    threads: int = Field(default=settings.DEFAULT_THREADS, ge=1)
    # Refuse unstable generating Phi and panels with fewer observations than coefficients per equation
    strict: bool = False

    @model_validator(mode="after")
    def _resolve_data(self) -> "RunConfig":
        if self.data is None:
            if self.simulation is None:
                raise ValueError("config needs a 'data' section or a 'simulation' section")
            out = Path(self.simulation.output_dir)
            self.data = DataConfig(csv=str(out / DATASET_FILE), schema_path=str(out / SCHEMA_FILE))
        return self

    def with_overrides(self, seed: Optional[int] = None, chains: Optional[int] = None, threads: Optional[int] = None, strict: bool = False) -> "RunConfig":
        update = {}
        if seed is not None:
            update["model"] = self.model.model_copy(update={"seed": seed})
            if self.simulation is not None:
                update["simulation"] = self.simulation.model_copy(update={"seed": seed})
        if chains is not None:
            update["chains"] = chains
        if threads is not None:
            update["threads"] = threads
        if strict:
            update["strict"] = True
        # revalidate so overrides obey the same bounds as file values
        return RunConfig.model_validate({**self.model_dump(), **{k: v.model_dump() if isinstance(v, BaseModel) else v for k, v in update.items()}})


def load_config(path: Union[str, Path]) -> RunConfig:
    """Parse a YAML or JSON run config (JSON is read by the YAML loader as well)."""
    with open(path, "r", encoding="utf-8") as f:
        payload = yaml.safe_load(f) or {}
    return RunConfig.model_validate(payload)
