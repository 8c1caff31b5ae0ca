import logging
from typing import List, Tuple

import numpy as np

from src.engine import priors
from src.engine.layout import project_to_signs
from src.engine.models import ChainState, ModelSpec
from src.sampling.models import HorseshoeState, TScaleState

logger = logging.getLogger(__name__)


def ridge_phi(Y: np.ndarray, X: np.ndarray, free: np.ndarray, penalty: float = priors.RIDGE_PENALTY) -> np.ndarray:
    """Equation-by-equation ridge estimate over each equation's free columns."""
    N, k = free.shape
    phi = np.zeros((N, k))
    for i in range(N):
        cols = np.flatnonzero(free[i])
        Xi = X[:, cols]
        phi[i, cols] = np.linalg.solve(Xi.T @ Xi + penalty * np.eye(cols.size), Xi.T @ Y[:, i])
    return phi


def principal_factors(E: np.ndarray, r: int) -> np.ndarray:
    """First r principal components of the residuals, scaled to unit sample variance."""
    centered = E - E.mean(axis=0)
    U, _, _ = np.linalg.svd(centered, full_matrices=False)
    factors = np.zeros((E.shape[0], r))
    k = min(r, U.shape[1])
    factors[:, :k] = U[:, :k] * np.sqrt(E.shape[0])
    return factors


def initial_state(Y: np.ndarray, X: np.ndarray, spec: ModelSpec, m: int, free: np.ndarray, codes: np.ndarray, tv_pairs: List[Tuple[int, int]], hs_sizes: List[int]) -> ChainState:
    """
    Ridge Phi, principal-component factors re-signed so each instrument loads
    positively on its own factor, least-squares loadings projected onto the
    restriction signs, variances from the implied idiosyncratic residuals.
    """
    T_eff, N = Y.shape
    n = N - m
    phi = ridge_phi(Y, X, free)
    E = Y - X @ phi.T
    factors = principal_factors(E, spec.r)

    loadings = np.linalg.lstsq(factors, E, rcond=None)[0].T
    for j in range(min(m, spec.r)):
        if loadings[j, j] < 0:
            factors[:, j] *= -1.0
            loadings[:, j] *= -1.0
    loadings = project_to_signs(loadings, codes, priors.MIN_SIGNED_LOADING)

    resid = E - factors @ loadings.T
    variances = np.maximum(resid.var(axis=0), priors.MIN_INITIAL_VARIANCE)

    state = ChainState(
        phi=phi,
        gamma=loadings[:m].copy(),
        lam=loadings[m:].copy(),
        factors=factors,
        w_diag=variances[:m].copy(),
        sigma=variances[m:].copy(),
        horseshoe_phi=[HorseshoeState.initial(size) for size in hs_sizes],
        tscale=TScaleState.gaussian(T_eff, n, priors.INITIAL_DOF),
    )
    if spec.features.stoch_vol:
        state.logvol = np.tile(np.log(variances[m:]), (T_eff, 1))
        state.omega2 = np.full(n, priors.INITIAL_OMEGA2)
        state.mixture_indicators = np.zeros((T_eff, n), dtype=np.int64)
    if tv_pairs:
        state.lambda_paths = np.repeat(state.lam[None], T_eff, axis=0)
        state.horseshoe_q = HorseshoeState.initial(len(tv_pairs), priors.INITIAL_Q_LOCAL, priors.INITIAL_Q_GLOBAL)
        state.q_diag = state.horseshoe_q.prior_variances()
    logger.debug(f"Initial state: |phi|max={np.abs(phi).max():.3f}, variances in [{variances.min():.3g}, {variances.max():.3g}]")
    return state
