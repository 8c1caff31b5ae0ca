from dataclasses import dataclass

import numpy as np

MIN_SCALE = 1e-12
MAX_SCALE = 1e12
MIN_DOF = 2.0


@dataclass
class HorseshoeState:
    """Global-local shrinkage state in auxiliary inverse-gamma form.

    Scales are stored squared: `local_scales[j]` is lambda_j^2 and
    `global_scale` is tau^2, so a coefficient's prior variance is
    local_scales[j] * global_scale * error_variance.
    """
    local_scales: np.ndarray
    global_scale: float
    auxiliary_locals: np.ndarray
    auxiliary_global: float

    def __post_init__(self):
        self.local_scales = np.asarray(self.local_scales, dtype=float)
        self.auxiliary_locals = np.asarray(self.auxiliary_locals, dtype=float)
        self.global_scale = float(self.global_scale)
        self.auxiliary_global = float(self.auxiliary_global)
        if self.local_scales.shape != self.auxiliary_locals.shape or self.local_scales.ndim != 1:
            raise ValueError("local_scales and auxiliary_locals must be 1-D arrays of equal length")
        if not self.is_positive():
            raise ValueError("Horseshoe scales must be positive and finite")

    @classmethod
    def initial(cls, size: int, local: float = 1.0, global_: float = 1.0) -> "HorseshoeState":
        return cls(
            local_scales=np.full(size, local),
            global_scale=global_,
            auxiliary_locals=np.ones(size),
            auxiliary_global=1.0,
        )

    @property
    def size(self) -> int:
        return int(self.local_scales.size)

    def prior_variances(self, error_variance: float = 1.0) -> np.ndarray:
        return self.local_scales * self.global_scale * error_variance

    def is_positive(self) -> bool:
        arrays = (self.local_scales, self.auxiliary_locals, np.array([self.global_scale, self.auxiliary_global]))
        return all(bool(np.all(np.isfinite(a)) and np.all(a > 0)) for a in arrays)

    def copy(self) -> "HorseshoeState":
        return HorseshoeState(self.local_scales.copy(), self.global_scale, self.auxiliary_locals.copy(), self.auxiliary_global)


@dataclass
class TScaleState:
    """Student-t scale-mixture state: T x n variance inflators and one dof per series."""
    mixing_scales: np.ndarray
    dof: np.ndarray

    def __post_init__(self):
        self.mixing_scales = np.asarray(self.mixing_scales, dtype=float)
        self.dof = np.asarray(self.dof, dtype=float)
        if self.mixing_scales.ndim != 2 or self.mixing_scales.shape[1] != self.dof.size:
            raise ValueError(f"mixing_scales must be T x {self.dof.size}, got {self.mixing_scales.shape}")
        if np.any(~(self.dof > MIN_DOF)):
            raise ValueError(f"dof must exceed {MIN_DOF}")
        if np.any(~(self.mixing_scales > 0)) or not np.all(np.isfinite(self.mixing_scales)):
            raise ValueError("mixing_scales must be positive and finite")

    @classmethod
    def gaussian(cls, T: int, n: int, dof: float = 30.0) -> "TScaleState":
        return cls(mixing_scales=np.ones((T, n)), dof=np.full(n, dof))

    def copy(self) -> "TScaleState":
        return TScaleState(self.mixing_scales.copy(), self.dof.copy())
