from .banded import sample_random_walk_path
from .models import HorseshoeState, TScaleState
from .shrinkage import sample_inverse_gamma, update_grouped_horseshoe, update_horseshoe
from .streams import Block, substream
from .student_t import sample_dof, sample_t_scales
from .truncated import Side, sample_truncated_normal
from .volatility import sample_logchi2_mixture_indicator, sample_mixture_indicators

__all__ = [
    "sample_random_walk_path",
    "HorseshoeState",
    "TScaleState",
    "sample_inverse_gamma",
    "update_grouped_horseshoe",
    "update_horseshoe",
    "Block",
    "substream",
    "sample_dof",
    "sample_t_scales",
    "Side",
    "sample_truncated_normal",
    "sample_logchi2_mixture_indicator",
    "sample_mixture_indicators",
]
