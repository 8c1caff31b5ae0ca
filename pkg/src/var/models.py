from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VarCoefficients:
    """Intercept plus lag matrices; lag_matrices[l-1] is Phi_l, shape (p, N, N)."""
    intercept: np.ndarray
    lag_matrices: np.ndarray

    def __post_init__(self):
        intercept = np.asarray(self.intercept, dtype=float)
        lags = np.asarray(self.lag_matrices, dtype=float)
        if lags.ndim != 3 or lags.shape[1] != lags.shape[2]:
            raise ValueError(f"lag_matrices must have shape (p, N, N), got {lags.shape}")
        if intercept.shape != (lags.shape[1],):
            raise ValueError(f"intercept must have shape ({lags.shape[1]},), got {intercept.shape}")
        if not (np.all(np.isfinite(intercept)) and np.all(np.isfinite(lags))):
            raise ValueError("VAR coefficients must be finite")
        object.__setattr__(self, "intercept", intercept)
        object.__setattr__(self, "lag_matrices", lags)

    @property
    def p(self) -> int:
        return self.lag_matrices.shape[0]

    @property
    def N(self) -> int:
        return self.lag_matrices.shape[1]

    @classmethod
    def from_matrix(cls, B: np.ndarray, p: int) -> "VarCoefficients":
        """From the stacked N x (1 + pN) form whose row i multiplies x_t = [1, y_{t-1}', ..., y_{t-p}']."""
        B = np.asarray(B, dtype=float)
        N = B.shape[0]
        if B.shape[1] != 1 + p * N:
            raise ValueError(f"Stacked coefficients must be {N} x {1 + p * N}, got {B.shape}")
        lags = B[:, 1:].reshape(N, p, N).transpose(1, 0, 2)
        return cls(intercept=B[:, 0].copy(), lag_matrices=lags.copy())

    def to_matrix(self) -> np.ndarray:
        lags = self.lag_matrices.transpose(1, 0, 2).reshape(self.N, self.p * self.N)
        return np.column_stack([self.intercept, lags])


@dataclass(frozen=True)
class VmaSequence:
    """Psi_0..Psi_H stacked as shape (H+1, N, N); Psi_0 is the identity."""
    psi: np.ndarray

    @property
    def H(self) -> int:
        return self.psi.shape[0] - 1

    def __getitem__(self, h: int) -> np.ndarray:
        return self.psi[h]
