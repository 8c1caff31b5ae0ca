from .analysis_service import export_draws, pool_chains, write_diagnostics, write_irfs
from .config import RunConfig, load_config
from .estimation_service import EstimationResult, estimate, prepare_dataset, simulate_to_disk

__all__ = [
    "export_draws",
    "pool_chains",
    "write_diagnostics",
    "write_irfs",
    "RunConfig",
    "load_config",
    "EstimationResult",
    "estimate",
    "prepare_dataset",
    "simulate_to_disk",
]
