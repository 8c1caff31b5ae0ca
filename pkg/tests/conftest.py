import numpy as np
import pandas as pd
import pytest

from src.engine.models import PosteriorDraws
from src.ingestion.panel import standardize
from src.synthetic.dgp import simulate
from src.synthetic.models import TruthSpec


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long simulation-recovery checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_panel():
    """Default-layout simulated panel (2 instruments, 7 core, 1 other), standardized."""
    ds, truth = simulate(TruthSpec(n_other=1, r=3, p=1), T=120, seed=3)
    return standardize(ds), truth


@pytest.fixture
def make_draws():
    """Factory for PosteriorDraws built around a truth bundle, `noise` perturbing every stored draw."""

    def build(truth, S=60, noise=0.0, seed=0, tv=False):
        gen = np.random.default_rng(seed)
        m = truth.m
        p = truth.coefficients.p
        phi = truth.coefficients.to_matrix()
        factors = truth.factors[p:]
        T_eff = factors.shape[0]

        def jitter(value):
            value = np.asarray(value, dtype=float)
            return np.repeat(value[None], S, axis=0) + noise * gen.standard_normal((S,) + value.shape)

        gamma = jitter(truth.loadings[:m]) * (truth.loadings[:m] != 0.0)
        lam = jitter(truth.loadings[m:]) * (truth.loadings[m:] != 0.0)
        lambda_paths, tv_rows = None, []
        if tv:
            lambda_paths = np.repeat(lam[:, None], T_eff, axis=1)
            lambda_paths[:, :, -1] *= np.linspace(1.0, 2.0, T_eff)[None, :, None]
            lam[:, -1] = lambda_paths[:, -1, -1]
            tv_rows = [truth.names[-1]]
        diagnostics = pd.DataFrame({
            "iteration": np.arange(S),
            "spectral_radius": 0.5 + 0.01 * gen.standard_normal(S),
            "explosive": np.zeros(S, dtype=bool),
            "mean_log_sigma": gen.standard_normal(S),
        })
        return PosteriorDraws(
            phi=jitter(phi),
            gamma=gamma,
            lam=lam,
            factors=jitter(factors),
            w=jitter(truth.w),
            sigma=jitter(truth.sigma),
            variables=list(truth.names),
            shocks=list(truth.scheme.shock_labels),
            dates=[d.strftime("%Y-%m") for d in pd.period_range("1995-01", periods=T_eff + p, freq="M")[p:]],
            p=p,
            scale=np.linspace(1.0, 2.0, len(truth.names)),
            tv_rows=tv_rows,
            diagnostics=diagnostics,
            lambda_paths=lambda_paths,
            metadata={"seed": seed, "m": m},
        )

    return build
