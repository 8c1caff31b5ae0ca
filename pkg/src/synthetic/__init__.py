from .dgp import oracle_irf, simulate, truth_scheme
from .models import LoadingRamp, TruthBundle, TruthSpec, VolatilityBreak

__all__ = ["oracle_irf", "simulate", "truth_scheme", "LoadingRamp", "TruthBundle", "TruthSpec", "VolatilityBreak"]
