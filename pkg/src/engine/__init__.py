from .gibbs import GibbsSampler, run_chain
from .models import ChainState, Features, ModelSpec, PosteriorDraws

__all__ = ["GibbsSampler", "run_chain", "ChainState", "Features", "ModelSpec", "PosteriorDraws"]
