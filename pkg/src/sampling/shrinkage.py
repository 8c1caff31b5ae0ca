"""
Inverse-gamma draws and the horseshoe sweep.

The horseshoe is sampled in its auxiliary inverse-gamma form:

    beta_j          ~ N(0, lambda_j^2 * tau^2 * sigma^2)
    lambda_j^2 | a_j ~ IG(1/2, 1/a_j)        a_j ~ IG(1/2, 1)
    tau^2 | b        ~ IG(1/2, 1/b)          b   ~ IG(1/2, 1)

so every full conditional is itself inverse-gamma. IG(shape, scale) has
density proportional to x^(-shape-1) exp(-scale/x) and mean scale/(shape-1).
"""
import numpy as np

from src.sampling.models import MAX_SCALE, MIN_SCALE, HorseshoeState


def _check_positive(name: str, value) -> None:
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must be positive and finite, got {value}")


def sample_inverse_gamma(shape, scale, rng: np.random.Generator, size=None):
    """Draw from IG(shape, scale); broadcasts over array arguments."""
    _check_positive("shape", shape)
    _check_positive("scale", scale)
    draw = 1.0 / rng.gamma(shape, 1.0 / np.asarray(scale, dtype=float), size=size)
    if np.ndim(draw) == 0:
        return float(draw)
    return draw


def _sweep(state: HorseshoeState, sum_squares: np.ndarray, counts: np.ndarray, error_variance: float, rng: np.random.Generator) -> HorseshoeState:
    tau2 = state.global_scale
    local_scale = 1.0 / state.auxiliary_locals + sum_squares / (2.0 * tau2 * error_variance)
    lam2 = np.clip(sample_inverse_gamma(0.5 * (counts + 1.0), local_scale, rng), MIN_SCALE, MAX_SCALE)

    global_scale = 1.0 / state.auxiliary_global + float(np.sum(sum_squares / lam2)) / (2.0 * error_variance)
    tau2 = float(np.clip(sample_inverse_gamma(0.5 * (float(np.sum(counts)) + 1.0), global_scale, rng), MIN_SCALE, MAX_SCALE))

    aux_locals = np.clip(sample_inverse_gamma(1.0, 1.0 + 1.0 / lam2, rng), MIN_SCALE, MAX_SCALE)
    aux_global = float(np.clip(sample_inverse_gamma(1.0, 1.0 + 1.0 / tau2, rng), MIN_SCALE, MAX_SCALE))
    return HorseshoeState(
        local_scales=np.atleast_1d(lam2),
        global_scale=tau2,
        auxiliary_locals=np.atleast_1d(aux_locals),
        auxiliary_global=aux_global,
    )


def update_horseshoe(state: HorseshoeState, coefficients: np.ndarray, error_variance: float, rng: np.random.Generator) -> HorseshoeState:
    """One sweep (locals, global, then both auxiliaries) given the current coefficients."""
    coefficients = np.asarray(coefficients, dtype=float).reshape(-1)
    if coefficients.size != state.size:
        raise ValueError(f"Expected {state.size} coefficients, got {coefficients.size}")
    if not np.all(np.isfinite(coefficients)):
        raise ValueError("coefficients must be finite")
    _check_positive("error_variance", error_variance)
    return _sweep(state, coefficients ** 2, np.ones(state.size), float(error_variance), rng)


def update_grouped_horseshoe(state: HorseshoeState, sum_squares: np.ndarray, counts: np.ndarray, rng: np.random.Generator, error_variance: float = 1.0) -> HorseshoeState:
    """
    Sweep where local scale j governs counts[j] draws whose squares sum to
    sum_squares[j] (the increments of one random-walk path share a scale).
    """
    sum_squares = np.asarray(sum_squares, dtype=float).reshape(-1)
    counts = np.asarray(counts, dtype=float).reshape(-1)
    if sum_squares.size != state.size or counts.size != state.size:
        raise ValueError(f"Expected {state.size} groups, got {sum_squares.size} sums and {counts.size} counts")
    if not np.all(np.isfinite(sum_squares)) or np.any(sum_squares < 0) or np.any(counts < 0):
        raise ValueError("sum_squares and counts must be finite and nonnegative")
    _check_positive("error_variance", error_variance)
    return _sweep(state, sum_squares, counts, float(error_variance), rng)
