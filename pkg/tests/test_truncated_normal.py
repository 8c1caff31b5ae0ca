import math

import numpy as np
import pytest
from scipy import stats

from src.sampling.truncated import Side, sample_truncated_normal, sample_truncated_normal_many

KS_CONFIGS = [
    (0.0, 1.0, Side.POSITIVE),
    (0.0, 1.0, Side.NEGATIVE),
    (2.0, 1.0, Side.POSITIVE),
    (-2.0, 1.0, Side.NEGATIVE),
    (-1.0, 1.0, Side.POSITIVE),
    (1.0, 1.0, Side.NEGATIVE),
    (-3.0, 0.25, Side.POSITIVE),
    (-5.0, 1.0, Side.POSITIVE),
    (5.0, 1.0, Side.NEGATIVE),
    (0.3, 4.0, Side.POSITIVE),
    (-0.4, 0.01, Side.NEGATIVE),
    (-8.0, 1.0, Side.POSITIVE),
]


def _reference(mean, variance, side):
    sd = math.sqrt(variance)
    if side == Side.POSITIVE:
        return stats.truncnorm(-mean / sd, np.inf, loc=mean, scale=sd)
    return stats.truncnorm(-np.inf, -mean / sd, loc=mean, scale=sd)


@pytest.mark.parametrize("mean,variance,side", KS_CONFIGS)
def test_matches_scipy_truncnorm(mean, variance, side):
    rng = np.random.default_rng(2024)
    draws = sample_truncated_normal_many(mean, variance, side, 4000, rng)
    result = stats.kstest(draws, _reference(mean, variance, side).cdf)
    assert result.pvalue > 0.01


def test_far_tail_positive_stays_positive():
    rng = np.random.default_rng(0)
    draws = sample_truncated_normal_many(-40.0, 1.0, Side.POSITIVE, 500, rng)
    assert np.all(draws > 0)
    # excess over zero is roughly exponential with rate 40
    assert 0.015 < draws.mean() < 0.035


def test_far_tail_negative_stays_negative():
    rng = np.random.default_rng(1)
    draws = sample_truncated_normal_many(1e4, 1.0, Side.NEGATIVE, 100, rng)
    assert np.all(draws < 0)
    assert np.all(np.isfinite(draws))


def test_mean_far_inside_support():
    rng = np.random.default_rng(2)
    draws = sample_truncated_normal_many(50.0, 1.0, Side.POSITIVE, 2000, rng)
    assert abs(draws.mean() - 50.0) < 0.1


def test_zero_mean_half_normal_moments():
    rng = np.random.default_rng(3)
    draws = sample_truncated_normal_many(0.0, 1.0, Side.POSITIVE, 20000, rng)
    assert abs(draws.mean() - math.sqrt(2 / math.pi)) < 0.02


@pytest.mark.parametrize("mean,variance", [(0.0, 0.0), (0.0, -1.0), (math.nan, 1.0), (0.0, math.inf)])
def test_rejects_bad_arguments(mean, variance, rng):
    with pytest.raises(ValueError):
        sample_truncated_normal(mean, variance, Side.POSITIVE, rng)
