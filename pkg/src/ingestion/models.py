from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator

VALID_TCODES = (1, 2, 4, 5, 7)


class Role(str, Enum):
    INSTRUMENT = "INSTRUMENT"
    CORE = "CORE"
    OTHER = "OTHER"


ROLE_ORDER = {Role.INSTRUMENT: 0, Role.CORE: 1, Role.OTHER: 2}


class VariableMeta(BaseModel):
    model_config = ConfigDict(frozen=True)

    mnemonic: str
    role: Role
    tcode: int
    description: str = ""

    @field_validator("tcode")
    @classmethod
    def _check_tcode(cls, value: int) -> int:
        if value not in VALID_TCODES:
            raise ValueError(f"tcode must be one of {VALID_TCODES}, got {value}")
        return value

    @field_validator("mnemonic")
    @classmethod
    def _check_mnemonic(cls, value: str) -> str:
        if not value or not value.strip():
            raise ValueError("mnemonic must be a non-empty string")
        return value.strip()


# Raw series keyed by mnemonic, each a float Series on a monthly PeriodIndex
RawSeries = Dict[str, pd.Series]


@dataclass(frozen=True)
class Dataset:
    """Aligned monthly panel: instrument block first, then CORE, then OTHER.

    `scaling` holds one (mean, sd) row per column once the panel has been
    standardized; `values` are then in standardized units.
    """
    values: np.ndarray
    dates: pd.PeriodIndex
    meta: List[VariableMeta]
    scaling: Optional[np.ndarray] = None
    zero_filled: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("Dataset values must be a T x (m+n) matrix")
        if values.shape[0] != len(self.dates):
            raise ValueError("Dataset values and dates disagree on T")
        if values.shape[1] != len(self.meta):
            raise ValueError("Dataset values and meta disagree on the number of columns")
        if np.isnan(values).any():
            raise ValueError("Dataset contains missing values")
        if len(self.dates) > 1:
            steps = np.diff(self.dates.asi8)
            if np.any(steps != 1):
                raise ValueError("Dataset dates must be strictly increasing and gap-free")
        roles = [ROLE_ORDER[v.role] for v in self.meta]
        if roles != sorted(roles):
            raise ValueError("Dataset columns must be ordered INSTRUMENT, CORE, OTHER")
        if self.scaling is not None:
            scaling = np.asarray(self.scaling, dtype=float)
            if scaling.shape != (values.shape[1], 2):
                raise ValueError("scaling must hold one (mean, sd) pair per column")
            object.__setattr__(self, "scaling", scaling)
        object.__setattr__(self, "values", values)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def names(self) -> List[str]:
        return [v.mnemonic for v in self.meta]

    @property
    def m(self) -> int:
        return sum(1 for v in self.meta if v.role == Role.INSTRUMENT)

    @property
    def n(self) -> int:
        return len(self.meta) - self.m

    @property
    def scale(self) -> np.ndarray:
        """Per-column standard deviation used for original-unit reporting (ones when unscaled)."""
        if self.scaling is None:
            return np.ones(len(self.meta))
        return self.scaling[:, 1]

    def with_values(self, values: np.ndarray, scaling: Optional[np.ndarray]) -> "Dataset":
        return replace(self, values=values, scaling=scaling)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=self.dates, columns=self.names)
