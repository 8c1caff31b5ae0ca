import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.analysis.irf import posterior_quantiles
from src.analysis.models import QUANTILE_LEVELS, IrfResult, quantile_label
from src.engine.models import PosteriorDraws

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def irf_to_frame(result: IrfResult) -> pd.DataFrame:
    """Long format: one row per (shock, variable, horizon, time) with one column per quantile."""
    Q, n_times, n_h, n_var, n_shock = result.values.shape
    shock, time, horizon, variable = np.meshgrid(
        np.arange(n_shock), np.arange(n_times), np.arange(n_h), np.arange(n_var), indexing="ij"
    )
    frame = pd.DataFrame({
        "shock": np.asarray(result.shocks, dtype=object)[shock.ravel()],
        "variable": np.asarray(result.variables, dtype=object)[variable.ravel()],
        "horizon": result.horizons[horizon.ravel()],
        "time": np.asarray(result.time_index, dtype=object)[time.ravel()],
    })
    # values axes are (q, time, horizon, variable, shock); reorder to the meshgrid order
    ordered = result.values.transpose(0, 4, 1, 2, 3).reshape(Q, -1)
    for k, level in enumerate(result.quantiles):
        frame[quantile_label(level)] = ordered[k]
    if all(t is None for t in result.time_index):
        frame = frame.drop(columns="time")
    return frame


def write_irf_csv(result: IrfResult, path: PathLike) -> pd.DataFrame:
    frame = irf_to_frame(result)
    frame.to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
    logger.info(f"Wrote {len(frame)} IRF rows to {path}")
    return frame


def write_irf_json(result: IrfResult, path: PathLike, metadata: Optional[Dict[str, Any]] = None) -> None:
    frame = irf_to_frame(result)
    payload = {
        "metadata": {
            "units": result.units,
            "quantiles": list(result.quantiles),
            "horizon": result.H,
            "shocks": result.shocks,
            "variables": result.variables,
            **(metadata or {}),
        },
        "rows": json.loads(frame.to_json(orient="records")),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)


def write_surface_csv(surface: pd.DataFrame, path: PathLike) -> None:
    surface.reset_index().to_csv(path, index=False, float_format="%.10g", lineterminator="\n")


def factor_quantiles(draws: PosteriorDraws, quantiles: Sequence[float] = QUANTILE_LEVELS) -> pd.DataFrame:
    """Posterior bands of each structural factor series (the estimated shocks), long format."""
    bands = posterior_quantiles(draws.factors, quantiles)  # (Q, T, r)
    T, r = bands.shape[1:]
    frame = pd.DataFrame({
        "shock": np.repeat(np.asarray(draws.shocks, dtype=object), T),
        "date": np.tile(np.asarray(draws.dates, dtype=object), r),
    })
    for k, level in enumerate(quantiles):
        frame[quantile_label(level)] = bands[k].T.reshape(-1)
    return frame


def draws_to_frame(draws: PosteriorDraws) -> pd.DataFrame:
    """Every stored array flattened to (draw, parameter, index, value) rows."""
    parts = []
    for name, array in draws.arrays().items():
        S = array.shape[0]
        flat = array.reshape(S, -1)
        index = [
            ",".join(str(i) for i in idx) if idx else ""
            for idx in np.ndindex(*array.shape[1:])
        ]
        parts.append(pd.DataFrame({
            "draw": np.repeat(np.arange(S), flat.shape[1]),
            "parameter": name,
            "index": np.tile(np.asarray(index, dtype=object), S),
            "value": flat.reshape(-1),
        }))
    if not parts:
        return pd.DataFrame(columns=["draw", "parameter", "index", "value"])
    return pd.concat(parts, ignore_index=True)
