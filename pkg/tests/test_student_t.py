import numpy as np
import pytest

from src.sampling.shrinkage import sample_inverse_gamma
from src.sampling.student_t import ADAPT_EVERY, AdaptiveStep, sample_dof, sample_t_scales


def test_t_scales_conditional_mean():
    rng = np.random.default_rng(20)
    residuals = np.zeros(40000)
    kappa = sample_t_scales(residuals, np.ones(40000), 5.0, rng)
    # IG(3, 2.5) has mean 1.25
    assert kappa.mean() == pytest.approx(1.25, abs=0.02)


def test_large_residuals_get_large_scales(rng):
    kappa = sample_t_scales(np.array([0.0, 10.0]), np.array([1.0, 1.0]), 4.0, rng)
    assert kappa.shape == (2,)
    assert kappa[1] > kappa[0]


def test_t_scales_validate_arguments(rng):
    with pytest.raises(ValueError):
        sample_t_scales(np.zeros(3), np.array([1.0, 0.0, 1.0]), 5.0, rng)
    with pytest.raises(ValueError):
        sample_t_scales(np.zeros(3), np.ones(3), 2.0, rng)


@pytest.mark.parametrize("true_dof,low,high", [(5.0, 3.5, 7.5), (40.0, 15.0, np.inf)])
def test_dof_posterior_concentrates_near_truth(true_dof, low, high):
    rng = np.random.default_rng(21)
    kappa = sample_inverse_gamma(true_dof / 2, true_dof / 2, rng, size=3000)
    dof, step = 10.0, AdaptiveStep()
    kept = []
    for it in range(4000):
        dof, accepted = sample_dof(dof, kappa, rng, step=step.step)
        step.record(accepted)
        if it == 1000:
            step.freeze()
        if it > 1000:
            kept.append(dof)
    assert low <= float(np.median(kept)) <= high


def test_zero_step_never_moves(rng):
    kappa = np.ones(10)
    assert sample_dof(7.0, kappa, rng, step=0.0) == (7.0, False)


def test_sample_dof_validates(rng):
    with pytest.raises(ValueError):
        sample_dof(2.0, np.ones(3), rng)
    with pytest.raises(ValueError):
        sample_dof(5.0, np.array([1.0, -1.0]), rng)


def test_adaptive_step_tunes_then_freezes():
    step = AdaptiveStep(step=1.0)
    for _ in range(ADAPT_EVERY):
        step.record(False)
    assert step.step == pytest.approx(0.8)
    for _ in range(ADAPT_EVERY):
        step.record(True)
    assert step.step == pytest.approx(0.96)
    step.freeze()
    assert step.acceptance_rate == 0.0
    for _ in range(3 * ADAPT_EVERY):
        step.record(False)
    assert step.step == pytest.approx(0.96)
    assert step.acceptance_rate == 0.0
