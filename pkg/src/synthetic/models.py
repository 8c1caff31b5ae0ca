import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.identification.models import RestrictionScheme
from src.identification.parsing import parse_scheme
from src.var.models import VarCoefficients


class LoadingRamp(BaseModel):
    """Linear path of one macro loading from `start` (first month) to `end` (last month)."""
    model_config = ConfigDict(extra="forbid")

    variable: str
    shock: int = Field(default=0, ge=0)
    start: float = 0.0
    end: float = 1.0


class VolatilityBreak(BaseModel):
    """Idiosyncratic variance multiplied by `factor` from fraction `at` of the sample onward."""
    model_config = ConfigDict(extra="forbid")

    variable: str
    factor: float = Field(default=9.0, gt=0)
    at: float = Field(default=0.5, gt=0, lt=1)


class TruthSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    m: int = Field(default=2, ge=0)
    n_core: int = Field(default=7, ge=0)
    n_other: int = Field(default=3, ge=0)
    r: int = Field(default=3, gt=0)
    p: int = Field(default=2, gt=0)
    instrument_sparsity: float = Field(default=0.6, ge=0, lt=1)
    instrument_sd: float = Field(default=0.3, gt=0)
    macro_sd: float = Field(default=0.5, gt=0)
    # Multipliers on the generated lag matrices and impact loadings (0 switches them off)
    phi_scale: float = Field(default=1.0, ge=0)
    loading_scale: float = Field(default=1.0, ge=0)
    # Explicit lag matrices, shape (p, N, N); overrides the random draw
    lag_matrices: Optional[List[List[List[float]]]] = None
    student_t_dof: Optional[float] = None
    ramps: List[LoadingRamp] = []
    breaks: List[VolatilityBreak] = []
    # Fail instead of rescaling an unstable Phi
    strict: bool = False
    start: str = "1995-01"

    @field_validator("student_t_dof")
    @classmethod
    def _check_dof(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 2:
            raise ValueError("student_t_dof must exceed 2 so the standardized t has unit variance")
        return value

    @property
    def N(self) -> int:
        return self.m + self.n_core + self.n_other

    @property
    def n(self) -> int:
        return self.n_core + self.n_other


@dataclass
class TruthBundle:
    """Every generating parameter of a simulated panel plus the realized factors."""
    coefficients: VarCoefficients
    loadings: np.ndarray                 # (m+n) x r, macro rows at their first-period value
    w: np.ndarray                        # instrument idiosyncratic variances
    sigma: np.ndarray                    # macro base variances
    factors: np.ndarray                  # T x r
    scheme: RestrictionScheme
    names: List[str]
    loading_paths: Optional[np.ndarray] = None  # T x n x r
    logvol: Optional[np.ndarray] = None         # T x n
    dof: Optional[float] = None
    zeroed: Optional[np.ndarray] = None         # T x m, months whose instrument value is 0
    rescaled: bool = False

    @property
    def m(self) -> int:
        return self.w.size

    def loadings_at(self, t: int) -> np.ndarray:
        if self.loading_paths is None:
            return self.loadings
        return np.vstack([self.loadings[:self.m], self.loading_paths[t]])

    def to_dict(self) -> Dict[str, Any]:
        def arr(a):
            return None if a is None else np.asarray(a).tolist()
        return {
            "names": self.names,
            "intercept": arr(self.coefficients.intercept),
            "lag_matrices": arr(self.coefficients.lag_matrices),
            "loadings": arr(self.loadings),
            "w": arr(self.w),
            "sigma": arr(self.sigma),
            "factors": arr(self.factors),
            "loading_paths": arr(self.loading_paths),
            "logvol": arr(self.logvol),
            "dof": self.dof,
            "zeroed": arr(self.zeroed),
            "rescaled": self.rescaled,
            "scheme": self.scheme.to_payload(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "TruthBundle":
        def arr(key, dtype=float):
            value = payload.get(key)
            return None if value is None else np.asarray(value, dtype=dtype)

        return cls(
            coefficients=VarCoefficients(arr("intercept"), arr("lag_matrices")),
            loadings=arr("loadings"),
            w=arr("w"),
            sigma=arr("sigma"),
            factors=arr("factors"),
            scheme=parse_scheme(json.dumps(payload["scheme"])),
            names=list(payload["names"]),
            loading_paths=arr("loading_paths"),
            logvol=arr("logvol"),
            dof=payload.get("dof"),
            zeroed=arr("zeroed", bool),
            rescaled=bool(payload.get("rescaled", False)),
        )
