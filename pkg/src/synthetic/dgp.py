"""
Forward simulation of the factor BVAR from fully known parameters, and the
exact impulse responses those parameters imply.
"""
import logging
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.errors import ValidationFailure
from src.identification.models import RestrictionScheme
from src.identification.schemes import CORE_NAMES, INSTRUMENT_NAMES, default_scheme, instruments_only_scheme
from src.ingestion.extraction import parse_month
from src.ingestion.models import Dataset, Role, VariableMeta
from src.engine.layout import sign_codes
from src.synthetic.models import TruthBundle, TruthSpec
from src.var.algebra import companion, spectral_radius, vma
from src.var.models import VarCoefficients

logger = logging.getLogger(__name__)

MAX_RADIUS = 0.95
RESCALE_TARGET = 0.9
SIGNED_RANGE = (0.5, 1.2)
FREE_SD = 0.7
DIAGONAL_RANGE = (0.9, 1.1)
LAG_SD = 0.15
PRESAMPLE = 100


def variable_names(spec: TruthSpec) -> Tuple[list, list, list]:
    instruments = INSTRUMENT_NAMES[:spec.m] if spec.m <= len(INSTRUMENT_NAMES) else [f"INSTR{k + 1}" for k in range(spec.m)]
    core = CORE_NAMES[:spec.n_core] if spec.n_core == len(CORE_NAMES) else [f"CORE{k + 1}" for k in range(spec.n_core)]
    other = [f"OTHER{k + 1}" for k in range(spec.n_other)]
    return instruments, core, other


def truth_scheme(spec: TruthSpec) -> RestrictionScheme:
    """The published grid when the dimensions allow it, otherwise the instrument conventions only."""
    instruments, core, other = variable_names(spec)
    names = instruments + core + other
    if spec.m == len(INSTRUMENT_NAMES) and spec.n_core == len(CORE_NAMES) and spec.r >= 2:
        return default_scheme(spec.m, spec.n_core, spec.n_other, spec.r, row_names=names)
    return instruments_only_scheme(spec.m, spec.n, spec.r, row_names=names, tv_rows=other)


def _draw_loadings(scheme: RestrictionScheme, m: int, rng: np.random.Generator) -> np.ndarray:
    codes = sign_codes(scheme)
    magnitude = rng.uniform(*SIGNED_RANGE, size=codes.shape)
    free = rng.normal(0.0, FREE_SD, size=codes.shape)
    loadings = np.select([codes == 1, codes == -1, codes == 2], [magnitude, -magnitude, free], default=0.0)
    for i in range(m):
        loadings[i, i] = rng.uniform(*DIAGONAL_RANGE)
    return loadings


def _draw_phi(spec: TruthSpec, rng: np.random.Generator) -> Tuple[VarCoefficients, bool]:
    N, p, m = spec.N, spec.p, spec.m
    if spec.lag_matrices is not None:
        lags = np.asarray(spec.lag_matrices, dtype=float)
        if lags.shape != (p, N, N):
            raise ValidationFailure(f"lag_matrices must have shape {(p, N, N)}, got {lags.shape}")
    else:
        lags = np.stack([rng.normal(0.0, LAG_SD / (lag + 1), size=(N, N)) for lag in range(p)])
        # instrument surprises are unpredictable
        lags[:, :m, :] = 0.0
        lags *= spec.phi_scale

    coeffs = VarCoefficients(np.zeros(N), lags)
    radius = spectral_radius(companion(coeffs))
    if radius < MAX_RADIUS:
        return coeffs, False
    if spec.strict:
        raise ValidationFailure(f"Generating Phi has spectral radius {radius:.3f} >= {MAX_RADIUS}")
    # scaling Phi_l by c^l scales every companion eigenvalue by c
    c = RESCALE_TARGET / radius
    lags = lags * (c ** np.arange(1, p + 1))[:, None, None]
    logger.warning(f"Generating Phi had spectral radius {radius:.3f}; rescaled to {RESCALE_TARGET}")
    return VarCoefficients(np.zeros(N), lags), True


def simulate(truth_spec: TruthSpec, T: int, seed: int) -> Tuple[Dataset, TruthBundle]:
    """
    Simulate y_t = sum_l Phi_l y_{t-l} + Gamma*_t f_t + D_t^{1/2} eta_t for
    t = 1..T with f_t ~ N(0, I). Instrument months chosen for sparsity are
    observed as exactly 0.0; macro eta is standardized Student-t when a dof
    is requested.
    """
    if T <= truth_spec.p:
        raise ValidationFailure(f"T must exceed the lag order, got T={T}, p={truth_spec.p}")
    if truth_spec.r < truth_spec.m:
        raise ValidationFailure(f"r={truth_spec.r} must be at least m={truth_spec.m}")
    rng = np.random.default_rng(seed)
    spec = truth_spec
    instruments, core, other = variable_names(spec)
    names = instruments + core + other
    m, n, N, r = spec.m, spec.n, spec.N, spec.r

    scheme = truth_scheme(spec)
    loadings = _draw_loadings(scheme, m, rng) * spec.loading_scale
    coeffs, rescaled = _draw_phi(spec, rng)

    paths = None
    if spec.ramps:
        paths = np.repeat(loadings[m:][None], T, axis=0)
        for ramp in spec.ramps:
            if ramp.variable not in other:
                raise ValidationFailure(f"Loading ramps apply to OTHER rows only, got '{ramp.variable}'")
            if ramp.shock >= r:
                raise ValidationFailure(f"Ramp shock {ramp.shock} outside 0..{r - 1}")
            i = names.index(ramp.variable) - m
            paths[:, i, ramp.shock] = np.linspace(ramp.start, ramp.end, T)
        loadings[m:] = paths[0]

    w = np.full(m, spec.instrument_sd ** 2)
    sigma = np.full(n, spec.macro_sd ** 2)
    logvol = None
    if spec.breaks:
        logvol = np.tile(np.log(sigma), (T, 1))
        for brk in spec.breaks:
            if brk.variable not in names[m:]:
                raise ValidationFailure(f"Volatility breaks apply to macro rows, got '{brk.variable}'")
            i = names.index(brk.variable) - m
            logvol[int(brk.at * T):, i] += np.log(brk.factor)

    factors = rng.standard_normal((PRESAMPLE + T, r))
    eta = rng.standard_normal((PRESAMPLE + T, N))
    if spec.student_t_dof is not None:
        nu = spec.student_t_dof
        eta[:, m:] = rng.standard_t(nu, size=(PRESAMPLE + T, n)) * np.sqrt((nu - 2.0) / nu)
    zeroed = rng.random((PRESAMPLE + T, m)) < spec.instrument_sparsity

    y = np.zeros((PRESAMPLE + T, N))
    for s in range(PRESAMPLE + T):
        t = max(s - PRESAMPLE, 0)
        G = loadings if paths is None else np.vstack([loadings[:m], paths[t]])
        macro_var = sigma if logvol is None else np.exp(logvol[t])
        sd = np.sqrt(np.concatenate([w, macro_var]))
        value = G @ factors[s] + sd * eta[s]
        for lag in range(1, spec.p + 1):
            if s - lag >= 0:
                value += coeffs.lag_matrices[lag - 1] @ y[s - lag]
        value[:m] = np.where(zeroed[s], 0.0, value[:m])
        y[s] = value

    values = y[PRESAMPLE:]
    start = parse_month(spec.start)
    dates = pd.period_range(start=start, periods=T, freq="M")
    meta = (
        [VariableMeta(mnemonic=v, role=Role.INSTRUMENT, tcode=1, description="simulated instrument") for v in instruments]
        + [VariableMeta(mnemonic=v, role=Role.CORE, tcode=1, description="simulated core series") for v in core]
        + [VariableMeta(mnemonic=v, role=Role.OTHER, tcode=1, description="simulated series") for v in other]
    )
    zero_filled = {v: int(zeroed[PRESAMPLE:, k].sum()) for k, v in enumerate(instruments)}
    ds = Dataset(values=values, dates=dates, meta=meta, zero_filled=zero_filled)
    truth = TruthBundle(
        coefficients=coeffs,
        loadings=loadings,
        w=w,
        sigma=sigma,
        factors=factors[PRESAMPLE:],
        scheme=scheme,
        names=names,
        loading_paths=paths,
        logvol=logvol,
        dof=spec.student_t_dof,
        zeroed=zeroed[PRESAMPLE:],
        rescaled=rescaled,
    )
    logger.info(f"Simulated T={T}, m={m}, n={n}, r={r}, p={spec.p}, seed={seed}, zero-filled={zero_filled}")
    return ds, truth


def oracle_irf(truth: TruthBundle, H: int, at_time: Optional[int] = None) -> np.ndarray:
    """
    Exact responses Psi_h Gamma*, shape (H+1, m+n, r). `at_time` indexes the
    simulated sample (estimation period t corresponds to at_time = t + p).
    """
    loadings = truth.loadings if at_time is None else truth.loadings_at(at_time)
    psi = vma(truth.coefficients, H).psi
    out = np.empty((H + 1,) + loadings.shape)
    out[0] = loadings
    out[1:] = psi[1:] @ loadings
    return out
