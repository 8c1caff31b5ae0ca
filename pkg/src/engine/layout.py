"""Index bookkeeping shared by the sampler steps."""
from typing import List, Sequence, Tuple

import numpy as np

from src.identification.models import Restriction, RestrictionScheme


def phi_free_mask(N: int, m: int, p: int, exclusions: Sequence[str] = ()) -> np.ndarray:
    """
    N x (1 + pN) mask of sampled lag coefficients; the intercept column is
    always free and excluded lag blocks are pinned to zero.
    """
    mask = np.ones((N, 1 + p * N), dtype=bool)
    lagged_instrument = np.tile(np.arange(N) < m, p)
    instrument_eq = np.arange(N) < m
    cols = mask[:, 1:]
    if "ym" in exclusions:
        cols[np.ix_(~instrument_eq, lagged_instrument)] = False
    if "mm" in exclusions:
        cols[np.ix_(instrument_eq, lagged_instrument)] = False
    if "my" in exclusions:
        cols[np.ix_(instrument_eq, ~lagged_instrument)] = False
    return mask


def tv_coefficients(scheme: RestrictionScheme, m: int, enabled: bool) -> List[Tuple[int, int]]:
    """(macro row, shock) pairs whose loadings follow random-walk paths."""
    if not enabled:
        return []
    pairs = []
    for i, tv in enumerate(scheme.tv_mask[m:]):
        if tv:
            pairs.extend((i, j) for j in range(scheme.r) if scheme.grid[m + i][j] != Restriction.ZERO)
    return pairs


def sign_codes(scheme: RestrictionScheme) -> np.ndarray:
    """(m+n) x r integer codes: +1 POS, -1 NEG, 0 ZERO, 2 FREE."""
    codes = {Restriction.POS: 1, Restriction.NEG: -1, Restriction.ZERO: 0, Restriction.FREE: 2}
    return np.array([[codes[cell] for cell in row] for row in scheme.grid], dtype=np.int8)


def project_to_signs(loadings: np.ndarray, codes: np.ndarray, floor: float) -> np.ndarray:
    out = np.where(codes == 0, 0.0, loadings)
    out = np.where(codes == 1, np.maximum(out, floor), out)
    out = np.where(codes == -1, np.minimum(out, -floor), out)
    return out
