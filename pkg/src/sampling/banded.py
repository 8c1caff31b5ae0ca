"""
Joint draw of a Gaussian random-walk path x_1..x_T given per-period
Gaussian pseudo-observations, without a Kalman filter:

    x_1 ~ N(initial_mean, initial_variance),  x_t - x_{t-1} ~ N(0, q)
    observation terms: exp(-precision_t/2 * x_t^2 + shift_t * x_t)

The posterior precision H'H/q + diag(precision) + e1 e1'/initial_variance is
tridiagonal; it is factored with a banded Cholesky and the draw is
mean + U^{-1} z where precision = U'U.
"""
import numpy as np
from scipy import linalg

DIFFUSE_INITIAL_VARIANCE = 10.0


def random_walk_precision(T: int, innovation_variance: float, initial_variance: float = DIFFUSE_INITIAL_VARIANCE) -> np.ndarray:
    """Prior precision in upper banded storage, shape (2, T): row 0 superdiagonal, row 1 diagonal."""
    band = np.zeros((2, T))
    if T > 1:
        diag = np.full(T, 2.0 / innovation_variance)
        diag[0] = diag[-1] = 1.0 / innovation_variance
        band[1] = diag
        band[0, 1:] = -1.0 / innovation_variance
    band[1, 0] += 1.0 / initial_variance
    return band


def sample_random_walk_path(
    precision: np.ndarray,
    shift: np.ndarray,
    innovation_variance: float,
    rng: np.random.Generator,
    initial_mean: float = 0.0,
    initial_variance: float = DIFFUSE_INITIAL_VARIANCE,
) -> np.ndarray:
    """
    Draw the whole path in one step. `precision` and `shift` are the per-period
    observation precisions and precision-weighted observations. Raises
    scipy.linalg.LinAlgError when the assembled precision is not positive
    definite.
    """
    precision = np.asarray(precision, dtype=float)
    shift = np.asarray(shift, dtype=float)
    T = precision.size
    if shift.size != T:
        raise ValueError(f"precision and shift lengths differ: {T} vs {shift.size}")
    if not innovation_variance > 0 or not initial_variance > 0:
        raise ValueError("innovation_variance and initial_variance must be positive")
    if np.any(precision < 0):
        raise ValueError("observation precisions must be nonnegative")

    band = random_walk_precision(T, innovation_variance, initial_variance)
    band[1] += precision
    linear = shift.copy()
    linear[0] += initial_mean / initial_variance

    upper = linalg.cholesky_banded(band, lower=False)
    mean = linalg.cho_solve_banded((upper, False), linear)
    noise = linalg.solve_banded((0, 1), upper, rng.standard_normal(T))
    path = mean + noise
    if not np.all(np.isfinite(path)):
        raise linalg.LinAlgError("non-finite random-walk path draw")
    return path
