"""Convergence diagnostics over one or more chains of stored draws."""
import logging
from dataclasses import dataclass
from typing import List, Sequence

import arviz as az
import numpy as np
import pandas as pd

from src.engine.models import PosteriorDraws

logger = logging.getLogger(__name__)

# Diagnostic columns that are bookkeeping rather than draws of a scalar
_NOT_SERIES = {"iteration", "explosive"}


@dataclass
class DiagnosticsReport:
    ess: pd.DataFrame
    rhat: pd.DataFrame
    explosive_share: float
    dof: pd.DataFrame
    chains: int
    draws_per_chain: int

    def to_text(self) -> str:
        lines = [
            f"chains: {self.chains}, stored draws per chain: {self.draws_per_chain}",
            f"explosive draw share (spectral radius >= 1): {self.explosive_share:.4f}",
            "",
            "effective sample size:",
            self.ess.to_string(index=False) if not self.ess.empty else "  (no scalar series)",
            "",
            "split R-hat, loadings on identified shocks:",
            self.rhat.to_string(index=False) if not self.rhat.empty else "  (no identified loadings)",
        ]
        if not self.dof.empty:
            lines += ["", "degrees of freedom:", self.dof.to_string(index=False)]
        return "\n".join(lines)


def _stack(chains: Sequence[np.ndarray]) -> np.ndarray:
    length = min(len(c) for c in chains)
    return np.stack([np.asarray(c, dtype=float)[:length] for c in chains])


def effective_sample_size(samples: np.ndarray) -> float:
    """Bulk ESS of a (chain, draw) or (draw,) array."""
    return float(az.ess(np.atleast_2d(np.asarray(samples, dtype=float))))


def split_rhat(samples: np.ndarray) -> float:
    return float(az.rhat(np.atleast_2d(np.asarray(samples, dtype=float)), method="split"))


def identified_loadings(draws: PosteriorDraws) -> List[tuple]:
    """(row, shock) cells of the identified shocks that are actually sampled (nonzero in some draw)."""
    loadings = draws.loadings()
    cells = []
    for j in range(min(draws.m, draws.r)):
        for i in range(loadings.shape[1]):
            if np.any(loadings[:, i, j] != 0.0):
                cells.append((i, j))
    return cells


def diagnose(chains: Sequence[PosteriorDraws]) -> DiagnosticsReport:
    if not chains or any(c.count == 0 for c in chains):
        raise ValueError("Diagnostics need at least one chain with stored draws")
    first = chains[0]
    length = min(c.count for c in chains)

    ess_rows = []
    for column in first.diagnostics.columns:
        if column in _NOT_SERIES:
            continue
        series = _stack([c.diagnostics[column].to_numpy() for c in chains])
        if not np.all(np.isfinite(series)):
            continue
        ess_rows.append({"series": column, "ess": effective_sample_size(series), "draws": series.size})

    rhat_rows = []
    for i, j in identified_loadings(first):
        series = _stack([c.loadings()[:, i, j] for c in chains])
        rhat_rows.append({"variable": first.variables[i], "shock": first.shocks[j], "rhat": split_rhat(series)})

    explosive = float(np.mean(np.concatenate([c.diagnostics["explosive"].to_numpy(dtype=float) for c in chains])))

    dof_rows = []
    if first.dof is not None:
        pooled = np.concatenate([c.dof for c in chains], axis=0)
        for k, name in enumerate(first.variables[first.m:]):
            q05, q50, q95 = np.quantile(pooled[:, k], [0.05, 0.5, 0.95])
            dof_rows.append({"variable": name, "q05": q05, "median": q50, "q95": q95})

    report = DiagnosticsReport(
        ess=pd.DataFrame(ess_rows, columns=["series", "ess", "draws"]),
        rhat=pd.DataFrame(rhat_rows, columns=["variable", "shock", "rhat"]),
        explosive_share=explosive,
        dof=pd.DataFrame(dof_rows),
        chains=len(chains),
        draws_per_chain=length,
    )
    if not report.rhat.empty and report.rhat["rhat"].max() > 1.1:
        logger.warning(f"Largest split R-hat on identified loadings is {report.rhat['rhat'].max():.3f}")
    return report
