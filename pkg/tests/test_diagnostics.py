import numpy as np
import pytest

from src.analysis.diagnostics import diagnose, effective_sample_size, identified_loadings, split_rhat


def test_ess_of_independent_draws(rng):
    samples = rng.standard_normal((2, 1000))
    ess = effective_sample_size(samples)
    assert 0.8 * samples.size < ess < 1.2 * samples.size


def test_ess_of_sticky_chain_is_small(rng):
    x = np.zeros(2000)
    for t in range(1, x.size):
        x[t] = 0.95 * x[t - 1] + rng.standard_normal()
    assert effective_sample_size(x) < 200


def test_rhat_flags_disagreeing_chains(rng):
    agree = rng.standard_normal((4, 500))
    assert split_rhat(agree) < 1.1
    apart = agree + np.arange(4)[:, None] * 3.0
    assert split_rhat(apart) > 1.5


def test_identified_loadings_skip_zero_cells(small_panel, make_draws):
    _, truth = small_panel
    draws = make_draws(truth, S=5, noise=0.1)
    cells = identified_loadings(draws)
    assert all(j < 2 for _, j in cells)
    assert (0, 0) in cells and (1, 1) in cells
    assert (1, 0) not in cells and (0, 1) not in cells
    pce = truth.names.index("PCE")
    assert (pce, 1) not in cells


def test_diagnose_two_chains(small_panel, make_draws):
    _, truth = small_panel
    chains = [make_draws(truth, S=100, noise=0.1, seed=k) for k in range(2)]
    report = diagnose(chains)
    assert report.chains == 2 and report.draws_per_chain == 100
    assert report.explosive_share == 0.0
    assert set(report.ess["series"]) == {"spectral_radius", "mean_log_sigma"}
    assert report.rhat["rhat"].max() < 1.1
    assert report.dof.empty
    text = report.to_text()
    assert "split R-hat" in text and "Target" in text


def test_diagnose_dof_summary(small_panel, make_draws):
    _, truth = small_panel
    draws = make_draws(truth, S=20)
    n = draws.lam.shape[1]
    draws.dof = np.tile(np.linspace(4.0, 12.0, 20)[:, None], (1, n))
    report = diagnose([draws])
    assert list(report.dof["variable"]) == truth.names[2:]
    assert report.dof["median"].iloc[0] == pytest.approx(8.0)


def test_diagnose_needs_draws(small_panel, make_draws):
    _, truth = small_panel
    with pytest.raises(ValueError):
        diagnose([make_draws(truth, S=0)])
    with pytest.raises(ValueError):
        diagnose([])
