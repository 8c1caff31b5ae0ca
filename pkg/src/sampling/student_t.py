"""
Student-t errors as a Gaussian scale mixture: u_t = sqrt(kappa_t * s_t) z_t
with kappa_t ~ IG(nu/2, nu/2) and s_t the current variance path.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import special

from src.sampling.models import MIN_DOF
from src.sampling.shrinkage import sample_inverse_gamma

logger = logging.getLogger(__name__)

# Mean of the exponential prior on nu - 2
DOF_PRIOR_MEAN = 10.0
DEFAULT_DOF_STEP = 0.5
ADAPT_EVERY = 50
TARGET_ACCEPTANCE = (0.25, 0.40)


def sample_t_scales(residuals: np.ndarray, variance_path: np.ndarray, dof: float, rng: np.random.Generator) -> np.ndarray:
    """kappa_t | u_t ~ IG((nu+1)/2, (nu + u_t^2/s_t)/2), drawn for every t."""
    residuals = np.asarray(residuals, dtype=float)
    variance_path = np.broadcast_to(np.asarray(variance_path, dtype=float), residuals.shape)
    if np.any(~(variance_path > 0)) or not np.all(np.isfinite(variance_path)):
        raise ValueError("variance_path must be positive and finite")
    if not dof > MIN_DOF:
        raise ValueError(f"dof must exceed {MIN_DOF}, got {dof}")
    scale = 0.5 * (dof + residuals ** 2 / variance_path)
    return np.atleast_1d(sample_inverse_gamma(0.5 * (dof + 1.0), scale, rng))


def dof_log_target(dof: float, sum_log: float, sum_inv: float, count: int, prior_mean: float = DOF_PRIOR_MEAN) -> float:
    """Log conditional of nu given the mixing scales (up to a constant), on the nu scale."""
    half = 0.5 * dof
    loglik = count * (half * math.log(half) - special.gammaln(half)) - (half + 1.0) * sum_log - half * sum_inv
    return float(loglik - (dof - MIN_DOF) / prior_mean)


def sample_dof(dof_current: float, mixing_scales: np.ndarray, rng: np.random.Generator, step: float = DEFAULT_DOF_STEP, prior_mean: float = DOF_PRIOR_MEAN) -> Tuple[float, bool]:
    """
    One random-walk Metropolis step on z = log(nu - 2). Returns the new
    value and whether the proposal was accepted. A zero step never moves.
    """
    if not dof_current > MIN_DOF:
        raise ValueError(f"dof must exceed {MIN_DOF}, got {dof_current}")
    kappa = np.asarray(mixing_scales, dtype=float).reshape(-1)
    if np.any(~(kappa > 0)):
        raise ValueError("mixing_scales must be positive")
    if step <= 0:
        return float(dof_current), False

    sum_log = float(np.sum(np.log(kappa)))
    sum_inv = float(np.sum(1.0 / kappa))
    z = math.log(dof_current - MIN_DOF)
    z_new = z + step * rng.standard_normal()
    dof_new = MIN_DOF + math.exp(z_new)
    u = rng.random()
    if not (math.isfinite(dof_new) and dof_new > MIN_DOF):
        return float(dof_current), False

    # Jacobian of nu = 2 + exp(z) contributes z
    log_ratio = (
        dof_log_target(dof_new, sum_log, sum_inv, kappa.size, prior_mean) + z_new
        - dof_log_target(dof_current, sum_log, sum_inv, kappa.size, prior_mean) - z
    )
    if u <= 0.0 or math.log(u) < log_ratio:
        return float(dof_new), True
    return float(dof_current), False


@dataclass
class AdaptiveStep:
    """Proposal scale tuned toward TARGET_ACCEPTANCE during burn-in, then frozen."""
    step: float = DEFAULT_DOF_STEP
    accepted: int = 0
    proposed: int = 0
    window_accepted: int = 0
    window_proposed: int = 0
    frozen: bool = False

    def record(self, accepted: bool) -> None:
        self.proposed += 1
        self.window_proposed += 1
        if accepted:
            self.accepted += 1
            self.window_accepted += 1
        if not self.frozen and self.window_proposed >= ADAPT_EVERY:
            rate = self.window_accepted / self.window_proposed
            if rate < TARGET_ACCEPTANCE[0]:
                self.step *= 0.8
            elif rate > TARGET_ACCEPTANCE[1]:
                self.step *= 1.2
            self.window_accepted = 0
            self.window_proposed = 0

    def freeze(self) -> None:
        self.frozen = True
        self.accepted = 0
        self.proposed = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 0.0
