"""
factor-bvar command line: simulate | estimate | irf | diagnose | export.

Exit codes: 0 ok, 2 invalid input or config, 3 numerical abort, 4 I/O or
integrity failure, 130 when an estimation was interrupted and only a
truncated set of draws was written.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src import settings
from src.errors import BvarError
from src.services.analysis_service import export_draws, write_diagnostics, write_irfs
from src.services.config import RunConfig, load_config
from src.services.estimation_service import estimate, simulate_to_disk
from src.storage.run_store import RunStore

logger = logging.getLogger("src.main")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 4
EXIT_INTERRUPTED = 130


def _setup_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factor-bvar", description="Factor-shock Bayesian VAR: simulate, estimate and analyze")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=str, help="YAML or JSON run config")
    common.add_argument("--run-dir", type=str, default=None, help="overrides run_dir from the config")

    sim = sub.add_parser("simulate", parents=[common], help="simulate a panel from a known DGP")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--strict", action="store_true", help="fail instead of rescaling an unstable generating VAR")

    est = sub.add_parser("estimate", parents=[common], help="run the Gibbs sampler and store draws")
    est.add_argument("--seed", type=int, default=None)
    est.add_argument("--chains", type=int, default=None)
    est.add_argument("--threads", type=int, default=None)
    est.add_argument("--strict", action="store_true")

    irf = sub.add_parser("irf", parents=[common], help="posterior quantiles of impulse responses")
    irf.add_argument("--units", choices=["standardized", "original"], default=None)
    irf.add_argument("--horizon", type=int, default=None)
    irf.add_argument("--shocks", nargs="+", default=None, help="shock labels or indices (overrides analysis.shocks)")
    irf.add_argument("--times", nargs="+", default=None, help="YYYY-MM stamps or sample indices for time-varying responses")
    irf.add_argument("--allow-truncated", action="store_true")

    sub.add_parser("diagnose", parents=[common], help="convergence diagnostics over stored chains")

    exp = sub.add_parser("export", parents=[common], help="convert draws.bin to long CSV")
    exp.add_argument("--output", type=str, default=None)
    exp.add_argument("--allow-truncated", action="store_true")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config).with_overrides(
        seed=getattr(args, "seed", None),
        chains=getattr(args, "chains", None),
        threads=getattr(args, "threads", None),
        strict=getattr(args, "strict", False),
    )
    if args.run_dir is not None:
        config = config.model_copy(update={"run_dir": args.run_dir})
    return config


def _attach_log(store: RunStore, run_dir: Path) -> Optional[logging.Handler]:
    if not run_dir.is_dir():
        return None
    handler = store.log_handler(run_dir)
    logging.getLogger().addHandler(handler)
    return handler


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _config(args)
    paths, truth = simulate_to_disk(config)
    sim = config.simulation
    print(json.dumps({
        "T": sim.T,
        "seed": sim.seed,
        "m": sim.truth.m,
        "n": sim.truth.n,
        "r": sim.truth.r,
        "p": sim.truth.p,
        "rescaled": truth.rescaled,
        "files": {k: str(v) for k, v in paths.items()},
    }, indent=2))
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    config = _config(args)
    store = RunStore(settings.RUNS_DIR)
    run_dir = store.create(config.run_dir)
    handler = _attach_log(store, run_dir)
    try:
        result = estimate(config, store)
    finally:
        if handler is not None:
            logging.getLogger().removeHandler(handler)
            handler.close()
    print(json.dumps(result.summary(), indent=2))
    return EXIT_INTERRUPTED if result.truncated else EXIT_OK


def cmd_irf(args: argparse.Namespace) -> int:
    config = _config(args)
    analysis = config.analysis
    update = {}
    if args.units is not None:
        update["units"] = args.units
    if args.horizon is not None:
        update["H"] = args.horizon
    if args.shocks is not None:
        update["shocks"] = args.shocks
    if args.times is not None:
        update["times"] = args.times
    if update:
        analysis = type(analysis).model_validate({**analysis.model_dump(), **update})
    store = RunStore(settings.RUNS_DIR)
    written = write_irfs(store, config.run_dir, analysis, allow_truncated=args.allow_truncated)
    print(json.dumps({k: str(v) for k, v in written.items()}, indent=2))
    return EXIT_OK


def cmd_diagnose(args: argparse.Namespace) -> int:
    config = _config(args)
    store = RunStore(settings.RUNS_DIR)
    report = write_diagnostics(store, config.run_dir)
    print(report.to_text())
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    config = _config(args)
    store = RunStore(settings.RUNS_DIR)
    paths = export_draws(store, config.run_dir, output=args.output, allow_truncated=args.allow_truncated)
    print(json.dumps({k: str(v) for k, v in paths.items()}, indent=2))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "irf": cmd_irf,
    "diagnose": cmd_diagnose,
    "export": cmd_export,
}


def main(argv: Optional[List[str]] = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return EXIT_INTERRUPTED
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_VALIDATION
    except BvarError as e:
        logger.error(str(e))
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
