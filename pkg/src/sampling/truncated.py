"""
Exact draws from a normal restricted to one open half-line.

Moderate truncation points use the inverse CDF evaluated in log space;
far-tail points (the mean deep on the wrong side of zero) use Robert's
exponential-proposal rejection on the excess over the truncation point, so
the returned value is formed as sd * excess and can never round onto or
across zero.
"""
import math
from enum import Enum

import numpy as np
from scipy import special

# Standardized truncation point above which the exponential sampler is used
TAIL_SWITCH = 0.5
# Proposals drawn per rejection round, and the round cap
_BATCH = 16
_MAX_ROUNDS = 1000


class Side(str, Enum):
    POSITIVE = "POSITIVE"
    NEGATIVE = "NEGATIVE"


def _check_args(mean: float, variance: float) -> None:
    if not (math.isfinite(mean) and math.isfinite(variance)):
        raise ValueError(f"mean and variance must be finite, got mean={mean}, variance={variance}")
    if variance <= 0:
        raise ValueError(f"variance must be > 0, got {variance}")


def _tail_excess(alpha: float, rng: np.random.Generator) -> float:
    """Excess z - alpha of a standard normal truncated to (alpha, inf), alpha >= TAIL_SWITCH."""
    rate = 0.5 * (alpha + math.sqrt(alpha * alpha + 4.0))
    for _ in range(_MAX_ROUNDS):
        excess = rng.standard_exponential(_BATCH) / rate
        z = alpha + excess
        accept = rng.random(_BATCH) <= np.exp(-0.5 * (z - rate) ** 2)
        accept &= excess > 0
        if accept.any():
            return float(excess[int(np.argmax(accept))])
    raise RuntimeError(f"Truncated normal tail sampler failed to accept at alpha={alpha}")


def _body_draw(alpha: float, rng: np.random.Generator) -> float:
    """Standard normal truncated to (alpha, inf) by log-space inverse CDF, alpha < TAIL_SWITCH."""
    log_tail = special.log_ndtr(-alpha)
    for _ in range(_MAX_ROUNDS):
        u = rng.random()
        if u <= 0.0:
            continue
        z = -float(special.ndtri_exp(math.log(u) + log_tail))
        if z > alpha:
            return z
    raise RuntimeError(f"Truncated normal inverse-CDF sampler failed at alpha={alpha}")


def sample_truncated_normal(mean: float, variance: float, side: Side, rng: np.random.Generator) -> float:
    """Draw from N(mean, variance) restricted to (0, inf) for POSITIVE or (-inf, 0) for NEGATIVE."""
    mean = float(mean)
    variance = float(variance)
    _check_args(mean, variance)
    sd = math.sqrt(variance)
    # Work with the mirrored problem so the support is always (0, inf)
    mu = mean if Side(side) == Side.POSITIVE else -mean
    alpha = -mu / sd
    if alpha >= TAIL_SWITCH:
        value = sd * _tail_excess(alpha, rng)
    else:
        value = sd * (_body_draw(alpha, rng) - alpha)
        if not value > 0.0:
            value = sd * _tail_excess(TAIL_SWITCH, rng) if alpha > 0 else math.fabs(mu)
    return value if Side(side) == Side.POSITIVE else -value


def sample_truncated_normal_many(mean: float, variance: float, side: Side, size: int, rng: np.random.Generator) -> np.ndarray:
    return np.array([sample_truncated_normal(mean, variance, side, rng) for _ in range(size)])
