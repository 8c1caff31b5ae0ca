import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.analysis.models import QUANTILE_LEVELS, UNITS, IrfResult, quantile_label
from src.engine.models import ChainState, PosteriorDraws
from src.errors import ValidationFailure
from src.var.algebra import vma
from src.var.models import VarCoefficients

logger = logging.getLogger(__name__)

MIN_DRAWS = 50
TimeRef = Union[int, str]


def irf_draw(state: ChainState, shock: int, H: int, p: int, at_time: Optional[int] = None) -> np.ndarray:
    """
    Responses Psi_h Gamma*_{.j} for h = 0..H, shape (H+1, m+n). With
    `at_time` the tv loadings are frozen at that period of the estimation
    sample. Row 0 is the loading column itself.
    """
    if not 0 <= shock < state.r:
        raise IndexError(f"shock {shock} outside 0..{state.r - 1}")
    if at_time is None:
        column = state.loadings()[:, shock]
    else:
        if state.lambda_paths is None:
            raise ValueError("at_time requires time-varying loadings")
        if not 0 <= at_time < state.lambda_paths.shape[0]:
            raise IndexError(f"period {at_time} outside the estimation sample 0..{state.lambda_paths.shape[0] - 1}")
        column = state.loadings_at(at_time)[:, shock]
    psi = vma(state.coefficients(p), H).psi
    out = np.empty((H + 1, column.size))
    out[0] = column
    out[1:] = psi[1:] @ column
    return out


def response_draws(draws: PosteriorDraws, H: int, at_time: Optional[int] = None) -> np.ndarray:
    """Per-draw responses to every shock, shape (S, H+1, m+n, r)."""
    loadings = draws.loadings() if at_time is None else draws.loadings_path(at_time)
    S, N, r = loadings.shape
    out = np.empty((S, H + 1, N, r))
    for s in range(S):
        psi = vma(VarCoefficients.from_matrix(draws.phi[s], draws.p), H).psi
        out[s, 0] = loadings[s]
        out[s, 1:] = psi[1:] @ loadings[s]
    return out


def resolve_time(draws: PosteriorDraws, when: TimeRef) -> int:
    """Index into the estimation sample from an integer or a YYYY-MM stamp."""
    if isinstance(when, str) and not when.lstrip("-").isdigit():
        if when not in draws.dates:
            raise IndexError(f"date {when} is outside the estimation sample {draws.dates[0]}..{draws.dates[-1]}")
        return draws.dates.index(when)
    index = int(when)
    if index < 0:
        index += len(draws.dates)
    if not 0 <= index < len(draws.dates):
        raise IndexError(f"period {when} outside the estimation sample")
    return index


def posterior_quantiles(samples: np.ndarray, levels: Sequence[float]) -> np.ndarray:
    q = np.quantile(samples, levels, axis=0, method="linear")
    # interpolation is monotone in the level; accumulate to rule out rounding reversals
    return np.maximum.accumulate(q, axis=0)


def summarize(
    draws: PosteriorDraws,
    shocks: Optional[Sequence[Union[int, str]]] = None,
    H: int = 24,
    times: Optional[Sequence[TimeRef]] = None,
    units: str = "standardized",
    quantiles: Sequence[float] = QUANTILE_LEVELS,
) -> IrfResult:
    """Per-cell empirical quantiles of the responses across stored draws."""
    if draws.count < MIN_DRAWS:
        raise ValidationFailure(f"IRF summaries need at least {MIN_DRAWS} stored draws, got {draws.count}")
    if units not in UNITS:
        raise ValidationFailure(f"units must be one of {UNITS}, got '{units}'")
    shock_idx = _shock_indices(draws, shocks)

    periods: List[Optional[int]] = [None] if not times else [resolve_time(draws, t) for t in times]
    values = []
    for period in periods:
        responses = response_draws(draws, H, period)[..., shock_idx]
        if units == "original":
            responses = responses * draws.scale[None, None, :, None]
        values.append(posterior_quantiles(responses, quantiles))
    stacked = np.stack(values, axis=1)
    return IrfResult(
        values=stacked,
        variables=list(draws.variables),
        shocks=[draws.shocks[j] for j in shock_idx],
        horizons=np.arange(H + 1),
        quantiles=tuple(quantiles),
        time_index=[None if t is None else draws.dates[t] for t in periods],
        units=units,
    )


def _shock_indices(draws: PosteriorDraws, shocks: Optional[Sequence[Union[int, str]]]) -> List[int]:
    if shocks is None:
        return list(range(draws.r))
    indices = []
    for shock in shocks:
        if isinstance(shock, str) and shock in draws.shocks:
            indices.append(draws.shocks.index(shock))
        elif isinstance(shock, int) or (isinstance(shock, str) and shock.isdigit()):
            j = int(shock)
            if not 0 <= j < draws.r:
                raise ValidationFailure(f"shock {j} outside 0..{draws.r - 1}")
            indices.append(j)
        else:
            raise ValidationFailure(f"Unknown shock '{shock}'; available: {draws.shocks}")
    return indices


def structural_matrices(state: ChainState, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    A* = (G'G)^{-1} G' (left pseudo-inverse of Gamma*) and B* = A* Phi in
    stacked coefficient form, so A* y_t = B* x_t + f_t + A* D^{1/2} eta_t.
    """
    G = state.loadings()
    if np.linalg.matrix_rank(G) < G.shape[1]:
        raise ValueError("Gamma* is rank deficient; the reduced-rank structural form is not identified")
    a_star = np.linalg.solve(G.T @ G, G.T)
    b_star = a_star @ state.coefficients(p).to_matrix()
    return a_star, b_star


def impact_surface(draws: PosteriorDraws, shock: Union[int, str], variable: str, quantiles: Sequence[float] = QUANTILE_LEVELS, units: str = "standardized") -> pd.DataFrame:
    """Per-period quantile bands of a time-varying impact loading, indexed by date."""
    if variable not in draws.variables:
        raise ValidationFailure(f"Unknown variable '{variable}'")
    if variable not in draws.tv_rows or draws.lambda_paths is None:
        raise ValidationFailure(f"'{variable}' has constant loadings; use irf_draw/summarize for its impact response")
    j = _shock_indices(draws, [shock])[0]
    i = draws.variables.index(variable)
    path = draws.lambda_paths[:, :, i - draws.m, j]
    if units == "original":
        path = path * draws.scale[i]
    bands = posterior_quantiles(path, quantiles)
    return pd.DataFrame(bands.T, index=pd.Index(draws.dates, name="date"), columns=[quantile_label(q) for q in quantiles])
