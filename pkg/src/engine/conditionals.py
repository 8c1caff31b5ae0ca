"""
Closed-form Gaussian conditionals used by the Gibbs steps. Everything here
is pure given the RNG handle.
"""
from typing import Tuple

import numpy as np
from scipy import linalg

from src.sampling.truncated import Side, sample_truncated_normal


def equation_posterior(y: np.ndarray, X: np.ndarray, weights: np.ndarray, prior_precision: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior mean and lower Cholesky factor of the precision for
    y = X b + e, e_t ~ N(0, 1/weights_t), b ~ N(0, diag(1/prior_precision)).
    """
    Xw = X * weights[:, None]
    precision = X.T @ Xw + np.diag(prior_precision)
    chol = linalg.cholesky(precision, lower=True)
    mean = linalg.cho_solve((chol, True), Xw.T @ y)
    return mean, chol


def draw_from_precision(mean: np.ndarray, chol: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """mean + L'^{-1} z, which has covariance (L L')^{-1}."""
    z = rng.standard_normal(mean.size)
    return mean + linalg.solve_triangular(chol, z, lower=True, trans="T")


def sample_loading_row(precision: np.ndarray, shift: np.ndarray, current: np.ndarray, codes: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    One element-wise sweep over a loading row with joint conditional
    N(precision^{-1} shift, precision^{-1}). ZERO entries (code 0) stay
    exactly 0; POS (+1) and NEG (-1) entries use the truncated conditional.
    """
    row = np.where(codes == 0, 0.0, current).astype(float)
    for j in range(row.size):
        if codes[j] == 0:
            continue
        pjj = precision[j, j]
        mean = (shift[j] - precision[j] @ row + pjj * row[j]) / pjj
        variance = 1.0 / pjj
        if codes[j] == 1:
            row[j] = sample_truncated_normal(mean, variance, Side.POSITIVE, rng)
        elif codes[j] == -1:
            row[j] = sample_truncated_normal(mean, variance, Side.NEGATIVE, rng)
        else:
            row[j] = mean + np.sqrt(variance) * rng.standard_normal()
    return row


def sample_factors(E: np.ndarray, loadings: np.ndarray, variances: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw every f_t from N(P_t^{-1} G_t' D_t^{-1} e_t, P_t^{-1}) with
    P_t = I + G_t' D_t^{-1} G_t. `loadings` is (N, r) or per-period (T, N, r).
    Raises numpy.linalg.LinAlgError when some P_t is not positive definite.
    """
    inv = 1.0 / variances
    if loadings.ndim == 2:
        precision = np.einsum("ir,ti,is->trs", loadings, inv, loadings)
        rhs = (E * inv) @ loadings
    else:
        precision = np.einsum("tir,ti,tis->trs", loadings, inv, loadings)
        rhs = np.einsum("tir,ti->tr", loadings, E * inv)
    r = rhs.shape[1]
    precision = precision + np.eye(r)
    chol = np.linalg.cholesky(precision)
    mean = np.linalg.solve(precision, rhs[..., None])[..., 0]
    z = rng.standard_normal(rhs.shape)
    noise = np.linalg.solve(np.swapaxes(chol, -1, -2), z[..., None])[..., 0]
    return mean + noise
