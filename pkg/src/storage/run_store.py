import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd

from src.engine.models import PosteriorDraws
from src.errors import IntegrityError
from src.storage.draws_codec import read_draws, write_draws

logger = logging.getLogger(__name__)

SPEC_FILE = "spec.json"
DRAWS_FILE = "draws.bin"
DIAGNOSTICS_FILE = "diagnostics.csv"
LOG_FILE = "log.txt"
_CHAIN_DIR = re.compile(r"^chain_(\d+)$")

PathLike = Union[str, Path]


class RunStore:
    """
    Run directories under a root. A single-chain run keeps spec.json,
    draws.bin, diagnostics.csv and log.txt at its top level; a multi-chain
    run keeps them in chain_0/, chain_1/, ... with the shared log on top.
    """

    def __init__(self, root: PathLike):
        self.root = Path(root).absolute()

    def resolve(self, run: PathLike) -> Path:
        """Absolute paths and ./ or ../ paths are used as given; any other run id lives under the root."""
        text = str(run)
        if Path(text).is_absolute() or text.startswith(("./", "../", ".\\", "..\\")):
            return Path(text).absolute()
        return self.root / text

    def create(self, run: PathLike) -> Path:
        path = self.resolve(run)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IntegrityError(f"Cannot create run directory {path}: {e}") from e
        return path

    @staticmethod
    def chain_dir(run_dir: Path, k: int) -> Path:
        return run_dir / f"chain_{k}"

    def write_spec(self, directory: Path, resolved: Dict[str, Any]) -> Path:
        path = directory / SPEC_FILE
        with open(path, "w", encoding="utf-8") as f:
            json.dump(resolved, f, indent=2, sort_keys=True)
        return path

    def read_spec(self, directory: Path) -> Dict[str, Any]:
        path = directory / SPEC_FILE
        if not path.exists():
            raise IntegrityError(f"No {SPEC_FILE} in {directory}")
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)

    def save_chain(self, directory: Path, draws: PosteriorDraws) -> None:
        directory.mkdir(parents=True, exist_ok=True)
        write_draws(draws, directory / DRAWS_FILE)
        frame = draws.diagnostics.copy()
        frame["truncated"] = draws.truncated
        frame.to_csv(directory / DIAGNOSTICS_FILE, index=False, float_format="%.17g", lineterminator="\n")

    def load_chain(self, directory: Path) -> PosteriorDraws:
        diagnostics_path = directory / DIAGNOSTICS_FILE
        diagnostics = None
        if diagnostics_path.exists():
            diagnostics = pd.read_csv(diagnostics_path).drop(columns="truncated", errors="ignore")
        return read_draws(directory / DRAWS_FILE, diagnostics)

    def chain_dirs(self, run: PathLike) -> List[Path]:
        run_dir = self.resolve(run)
        if not run_dir.is_dir():
            raise IntegrityError(f"Run directory {run_dir} does not exist")
        if (run_dir / DRAWS_FILE).exists():
            return [run_dir]
        chains = []
        for child in run_dir.iterdir():
            match = _CHAIN_DIR.match(child.name)
            if match and (child / DRAWS_FILE).exists():
                chains.append((int(match.group(1)), child))
        if not chains:
            raise IntegrityError(f"Run directory {run_dir} holds no draws")
        return [path for _, path in sorted(chains)]

    def load_run(self, run: PathLike) -> List[PosteriorDraws]:
        chains = [self.load_chain(d) for d in self.chain_dirs(run)]
        logger.info(f"Loaded {len(chains)} chain(s) from {self.resolve(run)}: {[c.count for c in chains]} draws")
        return chains

    def log_handler(self, directory: Path) -> logging.FileHandler:
        handler = logging.FileHandler(directory / LOG_FILE, mode="a", encoding="utf-8")
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        return handler
