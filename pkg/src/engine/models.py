from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.identification.models import RestrictionScheme
from src.sampling.models import HorseshoeState, TScaleState
from src.var.models import VarCoefficients

LagBlock = Literal["ym", "mm", "my"]
MAX_SEED = 2 ** 64 - 1


class Features(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tv_loadings: bool = False
    stoch_vol: bool = False
    student_t: bool = False


class ModelSpec(BaseModel):
    """Everything that determines a chain besides the data."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    p: int = Field(gt=0)
    r: int = Field(gt=0)
    features: Features = Features()
    scheme: RestrictionScheme
    draws: int = Field(gt=0)
    burn: int = Field(ge=0)
    thin: int = Field(default=1, ge=1)
    seed: int = Field(ge=0, le=MAX_SEED)
    # Lag blocks pinned to zero: "ym" lagged instruments in macro equations,
    # "mm" lagged instruments in instrument equations, "my" lagged macro in instrument equations
    lag_exclusions: List[LagBlock] = []
    # When False the lag coefficients get a fixed N(0, 10) prior instead of the horseshoe
    phi_shrinkage: bool = True

    @model_validator(mode="after")
    def _check_scheme(self) -> "ModelSpec":
        if self.scheme.r != self.r:
            raise ValueError(f"scheme defines {self.scheme.r} shocks but r={self.r}")
        return self

    @property
    def iterations(self) -> int:
        return self.burn + self.draws

    @property
    def stored_count(self) -> int:
        return self.draws // self.thin


@dataclass
class ChainState:
    """
    One Gibbs state. Variances of macro row i at period t are
    exp(logvol[t, i]) (or sigma[i]) times tscale.mixing_scales[t, i].
    lambda_paths, when present, has shape (T-p, n, r) and carries every
    macro row (non-tv rows stay equal to `lam`).
    """
    phi: np.ndarray                      # N x (1 + pN) stacked coefficients
    gamma: np.ndarray                    # m x r
    lam: np.ndarray                      # n x r
    factors: np.ndarray                  # (T-p) x r
    w_diag: np.ndarray                   # m
    sigma: np.ndarray                    # n
    horseshoe_phi: List[HorseshoeState]
    tscale: TScaleState
    lambda_paths: Optional[np.ndarray] = None
    logvol: Optional[np.ndarray] = None  # (T-p) x n
    omega2: Optional[np.ndarray] = None  # n
    q_diag: Optional[np.ndarray] = None  # one per tv coefficient
    horseshoe_q: Optional[HorseshoeState] = None
    mixture_indicators: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return self.gamma.shape[0]

    @property
    def r(self) -> int:
        return self.gamma.shape[1]

    def coefficients(self, p: int) -> VarCoefficients:
        return VarCoefficients.from_matrix(self.phi, p)

    def loadings(self) -> np.ndarray:
        """Constant (m+n) x r impact matrix Gamma* (tv rows at their final-period value)."""
        return np.vstack([self.gamma, self.lam])

    def loadings_at(self, t: int) -> np.ndarray:
        if self.lambda_paths is None:
            return self.loadings()
        return np.vstack([self.gamma, self.lambda_paths[t]])

    def macro_variances(self) -> np.ndarray:
        """(T-p) x n idiosyncratic variances with the t-mixing scales folded in."""
        base = np.exp(self.logvol) if self.logvol is not None else np.broadcast_to(self.sigma, self.tscale.mixing_scales.shape)
        return base * self.tscale.mixing_scales


# Array fields written to draws.bin, in file order
DRAW_ARRAYS = ("phi", "gamma", "lambda", "factors", "w", "sigma", "lambda_paths", "logvol", "q", "omega2", "dof")


@dataclass
class PosteriorDraws:
    """Thinned post-burn snapshots, leading axis = stored draw."""
    phi: np.ndarray                      # S x N x (1 + pN)
    gamma: np.ndarray                    # S x m x r
    lam: np.ndarray                      # S x n x r
    factors: np.ndarray                  # S x (T-p) x r
    w: np.ndarray                        # S x m
    sigma: np.ndarray                    # S x n
    variables: List[str]
    shocks: List[str]
    dates: List[str]                     # effective sample, one per factor period
    p: int
    scale: np.ndarray                    # per-variable sd for original-unit reporting
    tv_rows: List[str] = field(default_factory=list)
    diagnostics: pd.DataFrame = field(default_factory=pd.DataFrame)
    lambda_paths: Optional[np.ndarray] = None  # S x (T-p) x n x r
    logvol: Optional[np.ndarray] = None        # S x (T-p) x n
    q: Optional[np.ndarray] = None             # S x K
    omega2: Optional[np.ndarray] = None        # S x n
    dof: Optional[np.ndarray] = None           # S x n
    truncated: bool = False
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return self.phi.shape[0]

    @property
    def m(self) -> int:
        return self.gamma.shape[1]

    @property
    def r(self) -> int:
        return self.gamma.shape[2]

    def loadings(self) -> np.ndarray:
        """S x (m+n) x r stacked impact matrices."""
        return np.concatenate([self.gamma, self.lam], axis=1)

    def loadings_path(self, t: int) -> np.ndarray:
        if self.lambda_paths is None:
            raise ValueError("these draws have no time-varying loadings")
        if not 0 <= t < self.lambda_paths.shape[1]:
            raise IndexError(f"period {t} outside the estimation sample 0..{self.lambda_paths.shape[1] - 1}")
        return np.concatenate([self.gamma, self.lambda_paths[:, t]], axis=1)

    def state(self, s: int) -> ChainState:
        """Rebuild the stored snapshot s as a ChainState for per-draw analysis."""
        n = self.lam.shape[1]
        T_eff = self.factors.shape[1]
        dof = self.dof[s] if self.dof is not None else np.full(n, 30.0)
        return ChainState(
            phi=self.phi[s],
            gamma=self.gamma[s],
            lam=self.lam[s],
            factors=self.factors[s],
            w_diag=self.w[s],
            sigma=self.sigma[s],
            horseshoe_phi=[],
            tscale=TScaleState(np.ones((T_eff, n)), dof),
            lambda_paths=None if self.lambda_paths is None else self.lambda_paths[s],
            logvol=None if self.logvol is None else self.logvol[s],
            omega2=None if self.omega2 is None else self.omega2[s],
            q_diag=None if self.q is None else self.q[s],
        )

    def arrays(self) -> Dict[str, np.ndarray]:
        values = {
            "phi": self.phi, "gamma": self.gamma, "lambda": self.lam, "factors": self.factors,
            "w": self.w, "sigma": self.sigma, "lambda_paths": self.lambda_paths,
            "logvol": self.logvol, "q": self.q, "omega2": self.omega2, "dof": self.dof,
        }
        return {name: values[name] for name in DRAW_ARRAYS if values[name] is not None}

    def header(self) -> Dict[str, Any]:
        return {
            "variables": list(self.variables),
            "shocks": list(self.shocks),
            "dates": list(self.dates),
            "p": int(self.p),
            "scale": [float(v) for v in self.scale],
            "tv_rows": list(self.tv_rows),
            **self.metadata,
        }

    @classmethod
    def from_arrays(cls, arrays: Dict[str, np.ndarray], header: Dict[str, Any], truncated: bool, diagnostics: Optional[pd.DataFrame] = None) -> "PosteriorDraws":
        known = {"variables", "shocks", "dates", "p", "scale", "tv_rows"}
        return cls(
            phi=arrays["phi"],
            gamma=arrays["gamma"],
            lam=arrays["lambda"],
            factors=arrays["factors"],
            w=arrays["w"],
            sigma=arrays["sigma"],
            variables=list(header["variables"]),
            shocks=list(header["shocks"]),
            dates=list(header["dates"]),
            p=int(header["p"]),
            scale=np.asarray(header["scale"], dtype=float),
            tv_rows=list(header.get("tv_rows", [])),
            diagnostics=diagnostics if diagnostics is not None else pd.DataFrame(),
            lambda_paths=arrays.get("lambda_paths"),
            logvol=arrays.get("logvol"),
            q=arrays.get("q"),
            omega2=arrays.get("omega2"),
            dof=arrays.get("dof"),
            truncated=truncated,
            metadata={k: v for k, v in header.items() if k not in known},
        )
