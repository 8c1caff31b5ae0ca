from .algebra import build_regressors, companion, spectral_radius, vma
from .models import VarCoefficients, VmaSequence

__all__ = ["build_regressors", "companion", "spectral_radius", "vma", "VarCoefficients", "VmaSequence"]
