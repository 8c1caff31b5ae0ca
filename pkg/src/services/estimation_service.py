import json
import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor, wait
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src.engine.gibbs import StopSignal, run_chain
from src.engine.models import ModelSpec, PosteriorDraws
from src.errors import IntegrityError, ValidationFailure
from src.identification.parsing import resolve_scheme
from src.ingestion.extraction import load_csv, load_schema, write_csv, write_schema
from src.ingestion.models import Dataset
from src.ingestion.panel import assemble, standardize
from src.services.config import SCHEMA_FILE, DATASET_FILE, TRUTH_FILE, RunConfig
from src.storage.run_store import RunStore
from src.synthetic.dgp import simulate
from src.synthetic.models import TruthBundle

logger = logging.getLogger(__name__)


@dataclass
class EstimationResult:
    run_dir: Path
    chains: List[PosteriorDraws]
    wall_time: float
    interrupted: bool = False

    @property
    def truncated(self) -> bool:
        return self.interrupted or any(c.truncated for c in self.chains)

    def summary(self) -> Dict[str, object]:
        explosive = [float(c.diagnostics["explosive"].mean()) for c in self.chains if c.count]
        summary: Dict[str, object] = {
            "run_dir": str(self.run_dir),
            "chains": len(self.chains),
            "stored_draws": [c.count for c in self.chains],
            "wall_time_s": round(self.wall_time, 2),
            "explosive_share": round(sum(explosive) / len(explosive), 4) if explosive else None,
            "truncated": self.truncated,
        }
        acceptance = [float(c.diagnostics["dof_acceptance"].iloc[-1]) for c in self.chains if "dof_acceptance" in c.diagnostics and c.count]
        if acceptance:
            summary["dof_acceptance"] = [round(a, 3) for a in acceptance]
        return summary


def simulate_to_disk(config: RunConfig) -> Tuple[Dict[str, Path], TruthBundle]:
    """Simulate the configured DGP and write dataset.csv, schema.json and truth.json."""
    if config.simulation is None:
        raise ValidationFailure("config has no 'simulation' section")
    sim = config.simulation
    truth_spec = sim.truth.model_copy(update={"strict": sim.truth.strict or config.strict})
    # simulate first so a bad spec fails before anything is written
    ds, truth = simulate(truth_spec, sim.T, sim.seed)

    out = Path(sim.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IntegrityError(f"Cannot create output directory {out}: {e}") from e
    paths = {"dataset": out / DATASET_FILE, "schema": out / SCHEMA_FILE, "truth": out / TRUTH_FILE}
    write_csv(ds, paths["dataset"])
    write_schema(ds.meta, paths["schema"])
    with open(paths["truth"], "w", encoding="utf-8") as f:
        json.dump({"T": sim.T, "seed": sim.seed, "spec": truth_spec.model_dump(mode="json"), "truth": truth.to_dict()}, f)
    logger.info(f"Simulated panel written to {out}")
    return paths, truth


def load_truth(path: Path) -> TruthBundle:
    with open(path, "r", encoding="utf-8") as f:
        return TruthBundle.from_dict(json.load(f)["truth"])


def prepare_dataset(config: RunConfig) -> Dataset:
    data = config.data
    schema = load_schema(data.schema_path)
    raw = load_csv(data.csv, schema)
    ds = assemble(raw, schema, sample=data.sample)
    if data.standardize:
        ds = standardize(ds)
    return ds


def build_spec(config: RunConfig, ds: Dataset, chain: int = 0) -> ModelSpec:
    """Chain k runs with seed base + k."""
    scheme = resolve_scheme(config.scheme, ds, config.model.r)
    fields = config.model.model_dump()
    fields["seed"] = config.model.seed + chain
    spec = ModelSpec(scheme=scheme, **fields)
    if config.strict and ds.T - spec.p <= spec.p * len(ds.names):
        raise ValidationFailure(
            f"T={ds.T - spec.p} usable periods do not exceed p*(m+n)={spec.p * len(ds.names)} coefficients per equation"
        )
    return spec


def resolved_spec(config: RunConfig, spec: ModelSpec, chain: int) -> Dict[str, object]:
    """Everything needed to rerun one chain from the input data alone."""
    return {
        "config": config.model_dump(mode="json"),
        "chain": chain,
        "model": spec.model_dump(mode="json"),
    }


def _run_one(ds: Dataset, spec: ModelSpec, threads: int, progress: Optional[bool]) -> PosteriorDraws:
    return run_chain(ds, spec, threads=threads, progress=progress)


# Stop event of a chain worker process, installed by the pool initializer
_worker_stop: Optional[StopSignal] = None


def _install_stop(stop: StopSignal) -> None:
    global _worker_stop
    _worker_stop = stop


def _run_worker(ds: Dataset, spec: ModelSpec, threads: int) -> PosteriorDraws:
    return run_chain(ds, spec, threads=threads, progress=False, stop=_worker_stop)


def _run_parallel(ds: Dataset, specs: List[ModelSpec], threads: int) -> Tuple[List[Optional[PosteriorDraws]], bool]:
    """
    One process per chain. On Ctrl-C every chain is told to stop, and the
    truncated draws each worker already holds are still collected.
    """
    logger.info(f"Launching {len(specs)} chains with seeds {[s.seed for s in specs]}")
    context = multiprocessing.get_context()
    stop = context.Event()
    interrupted = False
    with ProcessPoolExecutor(max_workers=len(specs), mp_context=context, initializer=_install_stop, initargs=(stop,)) as pool:
        futures = [pool.submit(_run_worker, ds, spec, threads) for spec in specs]
        try:
            wait(futures)
        except KeyboardInterrupt:
            interrupted = True
            logger.warning("Interrupted; stopping every chain and keeping the draws stored so far")
            stop.set()
        chains: List[Optional[PosteriorDraws]] = []
        for k, future in enumerate(futures):
            try:
                chains.append(future.result())
            except KeyboardInterrupt:
                interrupted = True
                chains.append(None)
            except Exception as e:
                logger.error(f"Chain {k} failed: {e}")
                if not interrupted:
                    raise
                chains.append(None)
    return chains, interrupted


def estimate(config: RunConfig, store: RunStore, progress: Optional[bool] = None, ds: Optional[Dataset] = None) -> EstimationResult:
    """
    Run `config.chains` seeded chains. A single chain writes straight into
    the run directory; several chains run in separate processes and write
    chain_k/ subdirectories.
    """
    if ds is None:
        ds = prepare_dataset(config)
    specs = [build_spec(config, ds, k) for k in range(config.chains)]
    run_dir = store.create(config.run_dir)
    dirs = [run_dir] if config.chains == 1 else [store.chain_dir(run_dir, k) for k in range(config.chains)]
    for k, (directory, spec) in enumerate(zip(dirs, specs)):
        directory.mkdir(parents=True, exist_ok=True)
        store.write_spec(directory, resolved_spec(config, spec, k))

    started = time.perf_counter()
    interrupted = False
    if config.chains == 1:
        chains: List[Optional[PosteriorDraws]] = [_run_one(ds, specs[0], config.threads, progress)]
    else:
        chains, interrupted = _run_parallel(ds, specs, config.threads)
    saved = []
    for directory, draws in zip(dirs, chains):
        if draws is None:
            logger.error(f"No draws came back for {directory}; nothing written there")
            continue
        store.save_chain(directory, draws)
        saved.append(draws)
    if not saved:
        raise IntegrityError(f"No chain of run {run_dir} returned draws")

    result = EstimationResult(run_dir=run_dir, chains=saved, wall_time=time.perf_counter() - started, interrupted=interrupted)
    if result.truncated:
        logger.warning(f"Run {run_dir} was interrupted; draws are flagged truncated")
    logger.info(f"Estimation finished: {result.summary()}")
    return result
