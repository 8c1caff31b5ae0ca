"""Simulation-recovery checks: estimate on panels from known parameters and compare with the truth."""
import time

import numpy as np
import pytest

from src.analysis.irf import response_draws, structural_matrices
from src.engine.gibbs import run_chain
from src.engine.models import Features, ModelSpec
from src.identification.parsing import resolve_scheme
from src.synthetic.dgp import oracle_irf, simulate
from src.synthetic.models import LoadingRamp, TruthSpec, VolatilityBreak

IDENTIFIED = (0, 1)


def _estimate(ds, r=3, p=2, draws=10000, burn=5000, seed=1, scheme="default", phi_shrinkage=True, **features):
    spec = ModelSpec(
        p=p, r=r, scheme=resolve_scheme(scheme, ds, r), draws=draws, burn=burn, seed=seed,
        phi_shrinkage=phi_shrinkage, features=Features(**features),
    )
    return run_chain(ds, spec, threads=2, progress=False)


def test_pseudo_inverse_identity_on_every_draw(small_panel):
    ds, _ = small_panel
    spec = ModelSpec(p=1, r=3, scheme=resolve_scheme("default", ds, 3), draws=15, burn=5, seed=4)
    draws = run_chain(ds, spec, progress=False)
    for s in range(draws.count):
        a_star, _ = structural_matrices(draws.state(s), draws.p)
        np.testing.assert_allclose(a_star @ draws.loadings()[s], np.eye(3), atol=1e-10)


@pytest.mark.slow
def test_constant_model_recovers_loadings_and_irfs():
    ds, truth = simulate(TruthSpec(), T=400, seed=21)
    draws = _estimate(ds)
    median = np.median(draws.loadings(), axis=0)
    for j in IDENTIFIED:
        corr = np.corrcoef(median[:, j], truth.loadings[:, j])[0, 1]
        assert corr >= 0.9, f"shock {j}: correlation {corr:.3f}"

    H = 12
    responses = response_draws(draws, H)[..., list(IDENTIFIED)]
    lo, hi = np.quantile(responses, [0.05, 0.95], axis=0)
    target = oracle_irf(truth, H)[..., list(IDENTIFIED)]
    inside = (target >= lo - 1e-12) & (target <= hi + 1e-12)
    assert inside.mean() >= 0.85

    # macro idiosyncratic sd is 0.5, so each variance should sit near 0.25
    variance = draws.sigma.mean(axis=0)
    assert np.all((variance >= 0.15) & (variance <= 0.4)), variance


@pytest.mark.slow
def test_ramped_loading_is_tracked():
    spec = TruthSpec(ramps=[LoadingRamp(variable="OTHER1", shock=0, start=0.0, end=1.0)])
    ds, truth = simulate(spec, T=400, seed=22)
    draws = _estimate(ds, tv_loadings=True)
    m = truth.m
    ramp = truth.names.index("OTHER1") - m
    control = truth.names.index("OTHER2") - m
    median_path = np.median(draws.lambda_paths, axis=0)
    assert median_path[-1, ramp, 0] - median_path[0, ramp, 0] >= 0.4
    flat = median_path[:, control, 0]
    assert flat.max() - flat.min() < 0.4
    pairs = [tuple(pair) for pair in draws.metadata["tv_pairs"]]
    for j in IDENTIFIED:
        k = pairs.index((control, j))
        assert np.median(draws.q[:, k]) < 0.01


@pytest.mark.slow
def test_volatility_break_is_tracked():
    spec = TruthSpec(breaks=[VolatilityBreak(variable="RGDP", factor=9.0, at=0.5)])
    ds, truth = simulate(spec, T=400, seed=23)
    draws = _estimate(ds, stoch_vol=True)
    i = truth.names.index("RGDP") - truth.m
    path = draws.logvol[:, :, i].mean(axis=0)
    third = path.size // 3
    jump = path[-third:].mean() - path[:third].mean()
    assert abs(jump - np.log(9.0)) <= 0.7


@pytest.mark.slow
@pytest.mark.parametrize("dof, low, high", [(4.0, 3.0, 7.0), (None, 15.0, np.inf)])
def test_degrees_of_freedom_recovered(dof, low, high):
    ds, _ = simulate(TruthSpec(student_t_dof=dof), T=400, seed=24)
    draws = _estimate(ds, student_t=True)
    medians = np.median(draws.dof, axis=0)
    assert low <= np.median(medians) <= high


@pytest.mark.slow
def test_lag_coefficients_shrink_to_zero_under_a_null_var():
    ds, _ = simulate(TruthSpec(phi_scale=0.0), T=400, seed=25)
    draws = _estimate(ds, draws=5000, burn=2000)
    lag_means = draws.phi[:, :, 1:].mean(axis=0)
    assert np.abs(lag_means).max() < 0.05


@pytest.mark.slow
def test_factors_are_pinned_down_by_precise_data():
    spec = TruthSpec(instrument_sparsity=0.0, instrument_sd=0.05, macro_sd=0.05)
    ds, truth = simulate(spec, T=400, seed=26)
    draws = _estimate(ds, draws=1000, burn=500)
    mean_factors = draws.factors.mean(axis=0)
    for j in IDENTIFIED:
        corr = np.corrcoef(mean_factors[:, j], truth.factors[spec.p:, j])[0, 1]
        assert corr > 0.99, f"shock {j}: correlation {corr:.4f}"


@pytest.mark.slow
def test_square_free_loadings_reproduce_residual_covariance():
    spec = TruthSpec(m=1, n_core=0, n_other=1, r=2, p=1, instrument_sparsity=0.0)
    ds, truth = simulate(spec, T=3000, seed=27)
    draws = _estimate(ds, r=2, p=1, draws=2000, burn=1000, scheme="instruments-only", phi_shrinkage=False)

    lags = truth.coefficients.lag_matrices[0]
    eps = ds.values[1:] - ds.values[:-1] @ lags.T
    sample = eps.T @ eps / len(eps)
    loadings = draws.loadings()
    common = np.einsum("sir,sjr->ij", loadings, loadings) / draws.count
    idiosyncratic = np.diag(np.concatenate([draws.w, draws.sigma], axis=1).mean(axis=0))
    implied = common + idiosyncratic
    assert np.linalg.norm(implied - sample) / np.linalg.norm(sample) < 0.10


def _identified_rmse(draws, truth):
    median = np.median(draws.loadings(), axis=0)[truth.m:, list(IDENTIFIED)]
    return float(np.sqrt(np.mean((median - truth.loadings[truth.m:, list(IDENTIFIED)]) ** 2)))


@pytest.mark.slow
def test_student_t_errors_improve_loadings_under_outliers():
    improved = 0
    for seed in range(5):
        ds, truth = simulate(TruthSpec(n_other=1, student_t_dof=3.0), T=300, seed=40 + seed)
        gaussian = _estimate(ds, draws=2000, burn=1000, seed=seed)
        robust = _estimate(ds, draws=2000, burn=1000, seed=seed, student_t=True)
        improved += _identified_rmse(robust, truth) < _identified_rmse(gaussian, truth)
    assert improved >= 3


@pytest.mark.slow
def test_thirty_variable_full_feature_run_finishes_in_ten_minutes():
    ds, _ = simulate(TruthSpec(n_other=21), T=400, seed=28)
    assert len(ds.names) == 30
    spec = ModelSpec(
        p=2, r=3, scheme=resolve_scheme("default", ds, 3), draws=1000, burn=0, seed=1,
        features=Features(tv_loadings=True, stoch_vol=True, student_t=True),
    )
    started = time.perf_counter()
    draws = run_chain(ds, spec, threads=1, progress=False)
    assert draws.count == 1000
    assert time.perf_counter() - started <= 600
