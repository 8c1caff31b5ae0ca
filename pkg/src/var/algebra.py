import logging
from typing import Tuple, Union

import numpy as np

from src.ingestion.models import Dataset
from src.var.models import VarCoefficients, VmaSequence

logger = logging.getLogger(__name__)


def _as_matrix(data: Union[Dataset, np.ndarray]) -> np.ndarray:
    values = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2:
        raise ValueError(f"Expected a T x N panel, got shape {values.shape}")
    return values


def build_regressors(data: Union[Dataset, np.ndarray], p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Y has rows y_t for t = p..T-1; X has rows [1, y_{t-1}', ..., y_{t-p}'].
    """
    values = _as_matrix(data)
    T, N = values.shape
    if p <= 0 or p >= T:
        raise ValueError(f"Lag order must satisfy 0 < p < T, got p={p}, T={T}")
    if T <= p * N:
        logger.warning(f"T={T} does not exceed p*(m+n)={p * N}; estimation relies on shrinkage")
    Y = values[p:]
    lags = [values[p - lag:T - lag] for lag in range(1, p + 1)]
    X = np.column_stack([np.ones(T - p)] + lags)
    return Y, X


def companion(coeffs: VarCoefficients) -> np.ndarray:
    p, N = coeffs.p, coeffs.N
    top = coeffs.lag_matrices.transpose(1, 0, 2).reshape(N, p * N)
    if p == 1:
        return top.copy()
    lower = np.eye((p - 1) * N, p * N)
    return np.vstack([top, lower])


def vma(coeffs: VarCoefficients, H: int) -> VmaSequence:
    """Psi_0 = I and Psi_h = sum_{j=1..min(h,p)} Psi_{h-j} Phi_j."""
    if H < 0:
        raise ValueError(f"Horizon must be >= 0, got {H}")
    N, p = coeffs.N, coeffs.p
    psi = np.zeros((H + 1, N, N))
    psi[0] = np.eye(N)
    for h in range(1, H + 1):
        for j in range(1, min(h, p) + 1):
            psi[h] += psi[h - j] @ coeffs.lag_matrices[j - 1]
    return VmaSequence(psi=psi)


def spectral_radius(matrix: np.ndarray) -> float:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"spectral_radius needs a square matrix, got shape {matrix.shape}")
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))
