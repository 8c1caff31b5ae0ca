"""
Ten-component normal mixture approximating the log chi-square(1)
distribution, used to linearize log-volatility: log(u_t^2) = h_t + e_t with
e_t drawn from the mixture given its component indicator.

Table of Omori, Chib, Shephard and Nakajima (2007). Means are those of
log chi-square(1) itself (no re-centering needed).
"""
from typing import Union

import numpy as np
from scipy import special

MIXTURE_WEIGHTS = np.array([0.00609, 0.04775, 0.13057, 0.20674, 0.22715, 0.18842, 0.12047, 0.05591, 0.01575, 0.00115])
MIXTURE_MEANS = np.array([1.92677, 1.34744, 0.73504, 0.02266, -0.85173, -1.97278, -3.46788, -5.55246, -8.68384, -14.65000])
MIXTURE_VARIANCES = np.array([0.11265, 0.17788, 0.26768, 0.40611, 0.62699, 0.98583, 1.57469, 2.54498, 4.16591, 7.33342])
N_COMPONENTS = MIXTURE_WEIGHTS.size

# Added to squared residuals before the log so an exact zero stays finite
LOG_OFFSET = 1e-10


def log_squared(residuals: Union[float, np.ndarray]) -> np.ndarray:
    return np.log(np.asarray(residuals, dtype=float) ** 2 + LOG_OFFSET)


def mixture_posterior_weights(log_sq: np.ndarray, logvol: np.ndarray) -> np.ndarray:
    """Posterior component probabilities, shape (..., 10), for observations log_sq - logvol."""
    x = np.asarray(log_sq, dtype=float) - np.asarray(logvol, dtype=float)
    x = x[..., None]
    log_w = (
        np.log(MIXTURE_WEIGHTS)
        - 0.5 * np.log(MIXTURE_VARIANCES)
        - 0.5 * (x - MIXTURE_MEANS) ** 2 / MIXTURE_VARIANCES
    )
    return np.exp(log_w - special.logsumexp(log_w, axis=-1, keepdims=True))


def sample_mixture_indicators(residuals: np.ndarray, logvol: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one component index per observation by inverting the posterior CDF."""
    weights = mixture_posterior_weights(log_squared(residuals), logvol)
    cdf = np.cumsum(weights, axis=-1)
    u = rng.random(weights.shape[:-1])[..., None]
    index = np.sum(u > cdf, axis=-1)
    return np.minimum(index, N_COMPONENTS - 1).astype(np.int64)


def sample_logchi2_mixture_indicator(residual: float, logvol: float, rng: np.random.Generator) -> int:
    if not (np.isfinite(residual) and np.isfinite(logvol)):
        raise ValueError(f"residual and logvol must be finite, got {residual}, {logvol}")
    return int(sample_mixture_indicators(np.array([residual]), np.array([logvol]), rng)[0])
