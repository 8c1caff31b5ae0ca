from .diagnostics import diagnose
from .irf import impact_surface, irf_draw, structural_matrices, summarize
from .models import IrfResult

__all__ = ["diagnose", "impact_surface", "irf_draw", "structural_matrices", "summarize", "IrfResult"]
