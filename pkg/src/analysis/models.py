from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

QUANTILE_LEVELS: Tuple[float, ...] = (0.05, 0.16, 0.5, 0.84, 0.95)
UNITS = ("standardized", "original")


def quantile_label(level: float) -> str:
    return f"q{int(round(level * 100)):02d}"


@dataclass
class IrfResult:
    """
    Posterior quantiles of impulse responses.

    `values` has shape (quantile, time, horizon, variable, shock); the time
    axis has length 1 (labelled None) for constant-loading responses and one
    entry per requested period otherwise.
    """
    values: np.ndarray
    variables: List[str]
    shocks: List[str]
    horizons: np.ndarray
    quantiles: Tuple[float, ...] = QUANTILE_LEVELS
    time_index: List[Optional[str]] = field(default_factory=lambda: [None])
    units: str = "standardized"

    def __post_init__(self):
        expected = (len(self.quantiles), len(self.time_index), len(self.horizons), len(self.variables), len(self.shocks))
        if self.values.shape != expected:
            raise ValueError(f"IRF values have shape {self.values.shape}, expected {expected}")

    @property
    def H(self) -> int:
        return int(self.horizons[-1])

    def band(self, level: float) -> np.ndarray:
        return self.values[list(self.quantiles).index(level)]

    def median(self) -> np.ndarray:
        return self.band(0.5)
