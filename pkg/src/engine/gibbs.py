"""
Gibbs sampler for the instrument-augmented factor BVAR

    y*_t = Phi x_t + Gamma*_t f_t + D_t^{1/2} eta_t,   f_t ~ N(0, I_r)

with optional random-walk loadings, random-walk log-volatilities and
Student-t idiosyncratic errors. One iteration runs the blocks in the order
phi, loadings, factors, variances, stochvol, tv loadings, dof. Every block
draws from substreams keyed by (seed, iteration, block, task), so the
thread count never changes the output.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Protocol, Sequence, TypeVar

import numpy as np
import pandas as pd
from scipy import linalg
from tqdm import tqdm

from src import settings
from src.engine import priors
from src.engine.conditionals import draw_from_precision, equation_posterior, sample_factors, sample_loading_row
from src.engine.initialization import initial_state
from src.engine.layout import phi_free_mask, sign_codes, tv_coefficients
from src.engine.models import ChainState, ModelSpec, PosteriorDraws
from src.errors import DimensionError, NumericalAbort
from src.identification.parsing import check_against_dataset
from src.identification.validation import require_valid
from src.ingestion.models import Dataset
from src.sampling.banded import sample_random_walk_path
from src.sampling.models import TScaleState
from src.sampling.shrinkage import sample_inverse_gamma, update_grouped_horseshoe, update_horseshoe
from src.sampling.streams import Block, substream
from src.sampling.student_t import AdaptiveStep, sample_dof, sample_t_scales
from src.sampling.volatility import MIXTURE_MEANS, MIXTURE_VARIANCES, log_squared, sample_mixture_indicators
from src.var.algebra import build_regressors, companion, spectral_radius

logger = logging.getLogger(__name__)

R = TypeVar("R")


class StopSignal(Protocol):
    def is_set(self) -> bool: ...


class GibbsSampler:
    def __init__(
        self, ds: Dataset, spec: ModelSpec, threads: int = 1, progress: Optional[bool] = None, stop: Optional[StopSignal] = None
    ):
        require_valid(spec.scheme, ds.m, ds.n, spec.r)
        check_against_dataset(spec.scheme, ds)
        if spec.r < ds.m:
            raise DimensionError(f"r={spec.r} must be at least the number of instruments m={ds.m}")

        self.ds = ds
        self.spec = spec
        self.threads = max(1, int(threads))
        self.progress = settings.SHOW_PROGRESS if progress is None else progress
        self.stop = stop
        self.Y, self.X = build_regressors(ds, spec.p)
        self.T_eff, self.N = self.Y.shape
        self.m = ds.m
        self.n = self.N - self.m

        self.free = phi_free_mask(self.N, self.m, spec.p, spec.lag_exclusions)
        self.codes = sign_codes(spec.scheme)
        self.tv_pairs = tv_coefficients(spec.scheme, self.m, spec.features.tv_loadings)
        self.tv_rows = sorted({i for i, _ in self.tv_pairs})
        tv_set = set(self.tv_rows)
        # Rows whose loadings are drawn as constants (instrument rows always are)
        self.constant_rows = [i for i in range(self.N) if i < self.m or (i - self.m) not in tv_set]
        self.dof_steps = [AdaptiveStep() for _ in range(self.n)] if spec.features.student_t else []

        self.state: Optional[ChainState] = None
        self.iteration = 0
        self._pool: Optional[ThreadPoolExecutor] = None

    # ------------------------------------------------------------------ helpers

    def _rng(self, block: Block, task: int = 0) -> np.random.Generator:
        return substream(self.spec.seed, self.iteration, block, task)

    def _map(self, fn: Callable[[int], R], tasks: Sequence[int]) -> List[R]:
        if self._pool is None or self.threads == 1:
            return [fn(task) for task in tasks]
        return list(self._pool.map(fn, tasks))

    def _abort(self, block: Block, detail: str = "") -> NumericalAbort:
        return NumericalAbort(self.iteration, block.name.lower(), detail)

    def _check_finite(self, block: Block, **arrays: np.ndarray) -> None:
        for name, arr in arrays.items():
            if arr is not None and not np.all(np.isfinite(arr)):
                raise self._abort(block, f"non-finite {name}")

    def residuals(self) -> np.ndarray:
        """E = Y - X Phi'."""
        return self.Y - self.X @ self.state.phi.T

    def loadings_panel(self) -> np.ndarray:
        """(N, r) constant loadings, or (T-p, N, r) when some rows follow paths."""
        st = self.state
        if st.lambda_paths is None:
            return st.loadings()
        gamma = np.broadcast_to(st.gamma, (self.T_eff,) + st.gamma.shape)
        return np.concatenate([gamma, st.lambda_paths], axis=1)

    def common_component(self) -> np.ndarray:
        loadings = self.loadings_panel()
        if loadings.ndim == 2:
            return self.state.factors @ loadings.T
        return np.einsum("tr,tir->ti", self.state.factors, loadings)

    def variances(self) -> np.ndarray:
        """(T-p) x N idiosyncratic variances."""
        st = self.state
        return np.column_stack([np.broadcast_to(st.w_diag, (self.T_eff, self.m)), st.macro_variances()])

    def _macro_base_variance(self, i: int) -> np.ndarray:
        st = self.state
        if st.logvol is not None:
            return np.exp(st.logvol[:, i])
        return np.full(self.T_eff, st.sigma[i])

    # ------------------------------------------------------------------ blocks

    def step_phi(self) -> None:
        """Equation-by-equation regression of y - common component on x under the horseshoe."""
        st = self.state
        target = self.Y - self.common_component()
        D = self.variances()

        def task(i: int):
            rng = self._rng(Block.PHI, i)
            cols = np.flatnonzero(self.free[i])
            hs = st.horseshoe_phi[i]
            if self.spec.phi_shrinkage:
                lag_precision = 1.0 / hs.prior_variances()
            else:
                lag_precision = np.full(cols.size - 1, 1.0 / priors.FLAT_PHI_VARIANCE)
            prior_precision = np.concatenate([[1.0 / priors.INTERCEPT_VARIANCE], lag_precision])
            try:
                mean, chol = equation_posterior(target[:, i], self.X[:, cols], 1.0 / D[:, i], prior_precision)
            except linalg.LinAlgError as e:
                raise self._abort(Block.PHI, f"equation '{self.ds.names[i]}': {e}") from e
            beta = draw_from_precision(mean, chol, rng)
            if self.spec.phi_shrinkage and hs.size:
                hs = update_horseshoe(hs, beta[1:], 1.0, rng)
            return cols, beta, hs

        for i, (cols, beta, hs) in enumerate(self._map(task, range(self.N))):
            st.phi[i, cols] = beta
            st.horseshoe_phi[i] = hs
        self._check_finite(Block.PHI, phi=st.phi)

    def step_loadings(self) -> None:
        """Element-wise draws of the constant loading rows under the restriction grid."""
        st = self.state
        E = self.residuals()
        D = self.variances()
        F = st.factors
        G = st.loadings()
        identity = np.eye(self.spec.r) / priors.LOADING_VARIANCE

        def task(i: int) -> np.ndarray:
            rng = self._rng(Block.LOADINGS, i)
            w = 1.0 / D[:, i]
            precision = F.T @ (F * w[:, None]) + identity
            shift = F.T @ (w * E[:, i])
            return sample_loading_row(precision, shift, G[i], self.codes[i], rng)

        rows = self._map(task, self.constant_rows)
        for i, row in zip(self.constant_rows, rows):
            if i < self.m:
                st.gamma[i] = row
            else:
                st.lam[i - self.m] = row
                if st.lambda_paths is not None:
                    st.lambda_paths[:, i - self.m] = row
        self._check_finite(Block.LOADINGS, gamma=st.gamma, lam=st.lam)

    def step_factors(self) -> None:
        st = self.state
        try:
            st.factors = sample_factors(self.residuals(), self.loadings_panel(), self.variances(), self._rng(Block.FACTORS))
        except np.linalg.LinAlgError as e:
            raise self._abort(Block.FACTORS, str(e)) from e
        self._check_finite(Block.FACTORS, factors=st.factors)

    def step_variances(self) -> None:
        """Inverse-gamma draws for W and, without stochastic volatility, the constant Sigma."""
        st = self.state
        rng = self._rng(Block.VARIANCES)
        u = self.residuals() - self.common_component()
        shape0, scale0 = priors.VARIANCE_PRIOR
        shape = shape0 + 0.5 * self.T_eff
        if self.m:
            st.w_diag = np.atleast_1d(sample_inverse_gamma(shape, scale0 + 0.5 * np.sum(u[:, :self.m] ** 2, axis=0), rng))
        if st.logvol is None:
            scaled = u[:, self.m:] ** 2 / st.tscale.mixing_scales
            st.sigma = np.atleast_1d(sample_inverse_gamma(shape, scale0 + 0.5 * np.sum(scaled, axis=0), rng))
        self._check_finite(Block.VARIANCES, w=st.w_diag, sigma=st.sigma)

    def step_stochvol(self) -> None:
        """Mixture indicators, joint log-volatility path and omega^2 for every macro series."""
        st = self.state
        if st.logvol is None:
            return
        u = self.residuals()[:, self.m:] - self.common_component()[:, self.m:]
        scaled = u / np.sqrt(st.tscale.mixing_scales)
        shape0, scale0 = priors.OMEGA2_PRIOR

        def task(i: int):
            rng = self._rng(Block.STOCHVOL, i)
            indicators = sample_mixture_indicators(scaled[:, i], st.logvol[:, i], rng)
            precision = 1.0 / MIXTURE_VARIANCES[indicators]
            shift = (log_squared(scaled[:, i]) - MIXTURE_MEANS[indicators]) * precision
            try:
                path = sample_random_walk_path(precision, shift, st.omega2[i], rng, initial_variance=priors.PATH_INITIAL_VARIANCE)
            except linalg.LinAlgError as e:
                raise self._abort(Block.STOCHVOL, f"series '{self.ds.names[self.m + i]}': {e}") from e
            increments = np.diff(path)
            omega2 = sample_inverse_gamma(shape0 + 0.5 * increments.size, scale0 + 0.5 * float(increments @ increments), rng)
            return indicators, path, omega2

        for i, (indicators, path, omega2) in enumerate(self._map(task, range(self.n))):
            st.mixture_indicators[:, i] = indicators
            st.logvol[:, i] = path
            st.omega2[i] = omega2
        self._check_finite(Block.STOCHVOL, logvol=st.logvol, omega2=st.omega2)

    def step_tv_loadings(self) -> None:
        """Joint random-walk path per tv coefficient, then the horseshoe on path innovations."""
        st = self.state
        if not self.tv_pairs:
            return
        E = self.residuals()
        D = self.variances()
        F = st.factors
        q_index: Dict[tuple, int] = {pair: k for k, pair in enumerate(self.tv_pairs)}

        def task(i: int) -> np.ndarray:
            rng = self._rng(Block.TV_LOADINGS, i)
            paths = st.lambda_paths[:, i].copy()
            e = E[:, self.m + i]
            d = D[:, self.m + i]
            for j in range(self.spec.r):
                if (i, j) not in q_index:
                    continue
                offset = np.sum(F * paths, axis=1) - F[:, j] * paths[:, j]
                precision = F[:, j] ** 2 / d
                shift = F[:, j] * (e - offset) / d
                q = max(float(st.q_diag[q_index[(i, j)]]), priors.MIN_PATH_INNOVATION)
                try:
                    paths[:, j] = sample_random_walk_path(precision, shift, q, rng, initial_variance=priors.PATH_INITIAL_VARIANCE)
                except linalg.LinAlgError as e_:
                    raise self._abort(Block.TV_LOADINGS, f"series '{self.ds.names[self.m + i]}', shock {j}: {e_}") from e_
            return paths

        for i, paths in zip(self.tv_rows, self._map(task, self.tv_rows)):
            st.lambda_paths[:, i] = paths
            st.lam[i] = paths[-1]

        sums = np.array([np.sum(np.diff(st.lambda_paths[:, i, j]) ** 2) for i, j in self.tv_pairs])
        counts = np.full(len(self.tv_pairs), self.T_eff - 1.0)
        st.horseshoe_q = update_grouped_horseshoe(st.horseshoe_q, sums, counts, self._rng(Block.SHRINKAGE))
        st.q_diag = st.horseshoe_q.prior_variances()
        self._check_finite(Block.TV_LOADINGS, lambda_paths=st.lambda_paths, q=st.q_diag)

    def step_dof(self) -> None:
        """Metropolis update of each macro series' dof, then fresh mixing scales."""
        st = self.state
        if not self.spec.features.student_t:
            return
        u = self.residuals()[:, self.m:] - self.common_component()[:, self.m:]

        def task(i: int):
            rng = self._rng(Block.DOF, i)
            dof, accepted = sample_dof(st.tscale.dof[i], st.tscale.mixing_scales[:, i], rng, step=self.dof_steps[i].step)
            kappa = sample_t_scales(u[:, i], self._macro_base_variance(i), dof, rng)
            return dof, accepted, kappa

        results = self._map(task, range(self.n))
        dof = np.array([res[0] for res in results])
        kappa = np.column_stack([res[2] for res in results]) if results else st.tscale.mixing_scales
        for step, (_, accepted, _) in zip(self.dof_steps, results):
            step.record(accepted)
        self._check_finite(Block.DOF, dof=dof, kappa=kappa)
        st.tscale = TScaleState(kappa, dof)

    def sweep(self) -> None:
        self.step_phi()
        self.step_loadings()
        self.step_factors()
        self.step_variances()
        self.step_stochvol()
        self.step_tv_loadings()
        self.step_dof()

    # ------------------------------------------------------------------ run

    def initialize(self) -> ChainState:
        hs_sizes = [int(self.free[i, 1:].sum()) for i in range(self.N)]
        self.state = initial_state(self.Y, self.X, self.spec, self.m, self.free, self.codes, self.tv_pairs, hs_sizes)
        return self.state

    def _end_burn_in(self) -> None:
        if self.dof_steps:
            rates = ", ".join(f"{self.ds.names[self.m + i]}={s.acceptance_rate:.2f}" for i, s in enumerate(self.dof_steps))
            logger.info(f"End of burn-in, dof acceptance rates: {rates}")
        for step in self.dof_steps:
            step.freeze()

    def _diagnostics_row(self) -> dict:
        st = self.state
        radius = spectral_radius(companion(st.coefficients(self.spec.p)))
        base = st.logvol if st.logvol is not None else np.log(st.sigma)
        taus = [np.log(hs.global_scale) for hs in st.horseshoe_phi if hs.size] if self.spec.phi_shrinkage else []
        row = {
            "iteration": self.iteration,
            "spectral_radius": radius,
            "explosive": bool(radius >= 1.0),
            "mean_log_w": float(np.mean(np.log(st.w_diag))) if self.m else np.nan,
            "mean_log_sigma": float(np.mean(base)),
            "mean_log_tau2_phi": float(np.mean(taus)) if taus else np.nan,
        }
        if self.dof_steps:
            row["mean_dof"] = float(np.mean(st.tscale.dof))
            row["dof_acceptance"] = float(np.mean([s.acceptance_rate for s in self.dof_steps]))
        if st.q_diag is not None:
            row["mean_log_q"] = float(np.mean(np.log(st.q_diag)))
        return row

    def run(self) -> PosteriorDraws:
        spec = self.spec
        features = [name for name, on in spec.features.model_dump().items() if on]
        logger.info(
            f"Starting chain: T={self.T_eff} (after {spec.p} lags), m={self.m}, n={self.n}, r={spec.r}, "
            f"features={features or ['constant']}, seed={spec.seed}, draws={spec.draws}, burn={spec.burn}, thin={spec.thin}"
        )
        started = time.perf_counter()
        self.iteration = 0
        self.initialize()
        if spec.burn == 0:
            self._end_burn_in()

        buffer = _DrawBuffer(keep_dof=spec.features.student_t)
        truncated = False
        with ThreadPoolExecutor(max_workers=self.threads) as pool, tqdm(
            total=spec.iterations, desc=f"chain seed={spec.seed}", disable=not self.progress
        ) as bar:
            self._pool = pool
            try:
                for it in range(spec.iterations):
                    self.iteration = it
                    self.sweep()
                    if it == spec.burn - 1:
                        self._end_burn_in()
                    post = it - spec.burn
                    if post >= 0 and (post + 1) % spec.thin == 0:
                        buffer.append(self.state, self._diagnostics_row())
                    bar.update(1)
                    if settings.LOG_EVERY and (it + 1) % settings.LOG_EVERY == 0:
                        logger.info(f"Iteration {it + 1}/{spec.iterations}, stored {buffer.count}")
                    if self.stop is not None and self.stop.is_set() and it + 1 < spec.iterations:
                        truncated = True
                        logger.warning(f"Stop requested after iteration {it}; keeping {buffer.count} stored draws")
                        break
            except KeyboardInterrupt:
                truncated = True
                logger.warning(f"Interrupted at iteration {self.iteration}; keeping {buffer.count} stored draws")
            finally:
                self._pool = None

        draws = buffer.to_draws(self, truncated)
        elapsed = time.perf_counter() - started
        explosive = float(draws.diagnostics["explosive"].mean()) if draws.count else float("nan")
        logger.info(f"Chain finished in {elapsed:.1f}s: {draws.count} stored draws, explosive share {explosive:.3f}")
        if self.dof_steps:
            rates = [round(s.acceptance_rate, 3) for s in self.dof_steps]
            logger.info(f"Post burn-in dof acceptance rates: {rates}")
        return draws


class _DrawBuffer:
    def __init__(self, keep_dof: bool = False):
        self.keep_dof = keep_dof
        self.snapshots: Dict[str, list] = {}
        self.rows: List[dict] = []

    @property
    def count(self) -> int:
        return len(self.rows)

    def _add(self, name: str, value) -> None:
        if value is not None:
            self.snapshots.setdefault(name, []).append(np.array(value, copy=True))

    def append(self, st: ChainState, row: dict) -> None:
        self._add("phi", st.phi)
        self._add("gamma", st.gamma)
        self._add("lambda", st.lam)
        self._add("factors", st.factors)
        self._add("w", st.w_diag)
        self._add("sigma", np.exp(st.logvol[-1]) if st.logvol is not None else st.sigma)
        self._add("lambda_paths", st.lambda_paths)
        self._add("logvol", st.logvol)
        self._add("q", st.q_diag)
        self._add("omega2", st.omega2)
        self._add("dof", st.tscale.dof if self.keep_dof else None)
        self.rows.append(row)

    def _stack(self, name: str, empty_shape: tuple) -> np.ndarray:
        if name in self.snapshots:
            return np.stack(self.snapshots[name])
        return np.zeros((0,) + empty_shape)

    def _optional(self, name: str, enabled: bool, empty_shape: tuple) -> Optional[np.ndarray]:
        if not enabled:
            return None
        return self._stack(name, empty_shape)

    def to_draws(self, sampler: GibbsSampler, truncated: bool) -> PosteriorDraws:
        spec = sampler.spec
        N, m, n, r, T_eff = sampler.N, sampler.m, sampler.n, spec.r, sampler.T_eff
        tv = bool(sampler.tv_pairs)
        features = spec.features
        return PosteriorDraws(
            phi=self._stack("phi", (N, sampler.X.shape[1])),
            gamma=self._stack("gamma", (m, r)),
            lam=self._stack("lambda", (n, r)),
            factors=self._stack("factors", (T_eff, r)),
            w=self._stack("w", (m,)),
            sigma=self._stack("sigma", (n,)),
            variables=list(sampler.ds.names),
            shocks=list(spec.scheme.shock_labels),
            dates=[d.strftime("%Y-%m") for d in sampler.ds.dates[spec.p:]],
            p=spec.p,
            scale=sampler.ds.scale.copy(),
            tv_rows=[sampler.ds.names[m + i] for i in sampler.tv_rows],
            diagnostics=pd.DataFrame(self.rows),
            lambda_paths=self._optional("lambda_paths", tv, (T_eff, n, r)),
            logvol=self._optional("logvol", features.stoch_vol, (T_eff, n)),
            q=self._optional("q", tv, (len(sampler.tv_pairs),)),
            omega2=self._optional("omega2", features.stoch_vol, (n,)),
            dof=self._optional("dof", features.student_t, (n,)),
            truncated=truncated,
            metadata={
                "seed": spec.seed,
                "burn": spec.burn,
                "draws": spec.draws,
                "thin": spec.thin,
                "m": m,
                "features": features.model_dump(),
                "tv_pairs": [[int(i), int(j)] for i, j in sampler.tv_pairs],
            },
        )


def run_chain(
    ds: Dataset, spec: ModelSpec, threads: int = 1, progress: Optional[bool] = None, stop: Optional[StopSignal] = None
) -> PosteriorDraws:
    """
    Run one chain: burn + draws iterations, keeping every thin-th post-burn
    state. Setting `stop` ends the chain early with truncated draws.
    """
    return GibbsSampler(ds, spec, threads=threads, progress=progress, stop=stop).run()
