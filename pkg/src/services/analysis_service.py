import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.analysis.diagnostics import DiagnosticsReport, diagnose
from src.analysis.export import draws_to_frame, factor_quantiles, irf_to_frame, write_irf_json, write_surface_csv
from src.analysis.irf import impact_surface, summarize
from src.engine.models import PosteriorDraws
from src.errors import IntegrityError, ValidationFailure
from src.services.config import AnalysisConfig
from src.storage.run_store import PathLike, RunStore

logger = logging.getLogger(__name__)

_UNSAFE = re.compile(r"[^A-Za-z0-9_.-]+")


def _file_token(label: str) -> str:
    return _UNSAFE.sub("_", str(label))


def pool_chains(chains: Sequence[PosteriorDraws]) -> PosteriorDraws:
    """Concatenate the stored draws of chains that share variables, shocks and sample."""
    first = chains[0]
    if len(chains) == 1:
        return first
    for other in chains[1:]:
        if other.variables != first.variables or other.shocks != first.shocks or other.dates != first.dates:
            raise IntegrityError("chains in one run disagree on variables, shocks or sample")
    arrays = {name: np.concatenate([c.arrays()[name] for c in chains]) for name in first.arrays()}
    diagnostics = pd.concat([c.diagnostics.assign(chain=k) for k, c in enumerate(chains)], ignore_index=True)
    return PosteriorDraws.from_arrays(arrays, first.header(), any(c.truncated for c in chains), diagnostics)


def load_draws(store: RunStore, run_dir: PathLike, allow_truncated: bool = False) -> List[PosteriorDraws]:
    chains = store.load_run(run_dir)
    truncated = [k for k, c in enumerate(chains) if c.truncated]
    if truncated and not allow_truncated:
        raise IntegrityError(f"Run {run_dir} holds truncated draws (chains {truncated}); pass --allow-truncated to use them")
    return chains


def write_irfs(store: RunStore, run_dir: PathLike, analysis: AnalysisConfig, allow_truncated: bool = False) -> Dict[str, Path]:
    """
    irf_{shock}.csv per shock plus irf.json; with `times`, the responses are
    evaluated at each period and surface_{shock}_{variable}.csv holds the
    per-period impact bands of every time-varying row.
    """
    run_dir = store.resolve(run_dir)
    draws = pool_chains(load_draws(store, run_dir, allow_truncated))
    times = analysis.times or None
    if times and draws.lambda_paths is None:
        raise ValidationFailure("'times' needs a run with time-varying loadings")
    result = summarize(draws, shocks=analysis.shocks, H=analysis.H, times=times, units=analysis.units, quantiles=analysis.quantiles)

    written: Dict[str, Path] = {}
    frame = irf_to_frame(result)
    for shock in result.shocks:
        path = run_dir / f"irf_{_file_token(shock)}.csv"
        frame[frame["shock"] == shock].to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
        written[f"irf_{shock}"] = path
    json_path = run_dir / "irf.json"
    write_irf_json(result, json_path, metadata={"draws": draws.count, "seed": draws.metadata.get("seed")})
    written["irf_json"] = json_path

    if times:
        for shock in result.shocks:
            for variable in draws.tv_rows:
                surface = impact_surface(draws, shock, variable, analysis.quantiles, analysis.units)
                path = run_dir / f"surface_{_file_token(shock)}_{_file_token(variable)}.csv"
                write_surface_csv(surface, path)
                written[f"surface_{shock}_{variable}"] = path
    logger.info(f"Wrote {len(written)} IRF files to {run_dir}")
    return written


def write_diagnostics(store: RunStore, run_dir: PathLike) -> DiagnosticsReport:
    run_dir = store.resolve(run_dir)
    chains = load_draws(store, run_dir, allow_truncated=True)
    report = diagnose(chains)
    (run_dir / "diagnostics_report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
    report.ess.to_csv(run_dir / "diagnostics_ess.csv", index=False, lineterminator="\n")
    report.rhat.to_csv(run_dir / "diagnostics_rhat.csv", index=False, lineterminator="\n")
    if not report.dof.empty:
        report.dof.to_csv(run_dir / "diagnostics_dof.csv", index=False, lineterminator="\n")
    return report


def export_draws(store: RunStore, run_dir: PathLike, output: Optional[Path] = None, allow_truncated: bool = False) -> Dict[str, Path]:
    """Long CSV dump of every stored draw plus posterior bands of the factor series."""
    run_dir = store.resolve(run_dir)
    chains = load_draws(store, run_dir, allow_truncated)
    out = Path(output) if output is not None else run_dir
    out.mkdir(parents=True, exist_ok=True)
    frames = [draws_to_frame(c).assign(chain=k) for k, c in enumerate(chains)]
    dump = pd.concat(frames, ignore_index=True)[["chain", "draw", "parameter", "index", "value"]]
    paths = {"draws": out / "draws.csv", "factors": out / "factors.csv"}
    dump.to_csv(paths["draws"], index=False, float_format="%.17g", lineterminator="\n")
    factor_quantiles(pool_chains(chains)).to_csv(paths["factors"], index=False, float_format="%.10g", lineterminator="\n")
    logger.info(f"Exported {len(dump)} draw values to {paths['draws']}")
    return paths
