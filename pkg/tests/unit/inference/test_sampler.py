"""
우도와 MCMC 샘플러 단위 테스트
"""
import math
import unittest

import numpy as np
import pandas as pd
import pytest

from svmc.inference.sampler import (
    ChainConfig,
    ChainConfigError,
    InsufficientData,
    NonFiniteLikelihood,
    PosteriorChain,
    chain_seeds,
    log_likelihood,
    measurement_log_likelihood,
    sample_chains,
    sample_posterior,
)
from svmc.inference.summary import posterior_summary
from svmc.models.core import LengthMismatch, ModelKind, ModelParams
from svmc.models.moments import mean_correction
from svmc.simulation.simulate import SimConfig, simulate_path

CLASSICAL = ModelParams(alpha=-8.0, phi=0.95, sigma=0.2, rho=0.0, kind=ModelKind.CLASSICAL)
MEAN_CORRECTED = ModelParams(alpha=-7.88, phi=0.96, sigma=0.18, rho=0.105, kind=ModelKind.MEAN_CORRECTED)


def _normal_logpdf(x, mean, var):
    return -0.5 * math.log(2.0 * math.pi * var) - (x - mean) ** 2 / (2.0 * var)


def _naive_log_likelihood(params, h_full, r):
    """항별로 직접 더한 완전 자료 로그 우도"""
    a, p, s, rho = params.alpha, params.phi, params.sigma, params.rho
    mu = mean_correction(params) if params.kind is ModelKind.MEAN_CORRECTED else 0.0
    total = _normal_logpdf(h_full[0], a, s ** 2 / (1.0 - p ** 2))
    for t in range(1, len(h_full)):
        expected_h = a + p * (h_full[t - 1] - a)
        total += _normal_logpdf(h_full[t], expected_h, s ** 2)
        eta = (h_full[t] - expected_h) / s
        mean = mu + rho * math.exp(h_full[t] / 2.0) * eta
        total += _normal_logpdf(r[t - 1], mean, math.exp(h_full[t]) * (1.0 - rho ** 2))
    return total


class TestLikelihood(unittest.TestCase):
    """로그 우도 테스트"""

    def setUp(self):
        source = np.random.default_rng(12)
        self.h_full = -7.88 + 0.4 * source.standard_normal(8)
        self.r = 0.02 * source.standard_normal(7)

    def test_matches_naive_sum(self):
        """임의의 모수, 경로, 수익률 100개에서 상대 오차 1e-10 이하"""
        source = np.random.default_rng(2024)
        kinds = list(ModelKind)
        for case in range(100):
            kind = kinds[case % len(kinds)]
            params = ModelParams(
                alpha=source.uniform(-10.0, 0.0),
                phi=source.uniform(-0.95, 0.98),
                sigma=source.uniform(0.05, 1.0),
                rho=0.0 if kind is ModelKind.CLASSICAL else source.uniform(-0.9, 0.9),
                kind=kind,
            )
            n = int(source.integers(10, 60))
            h_full = params.alpha + source.standard_normal(n + 1)
            r = np.exp(h_full[1:] / 2.0) * source.standard_normal(n)

            expected = _naive_log_likelihood(params, h_full, r)
            actual = log_likelihood(params, h_full, r)
            self.assertLessEqual(abs(actual - expected), 1e-10 * abs(expected), msg=f"{case}: {params}")

    def test_uncorrelated_matches_classical(self):
        source = np.random.default_rng(7)
        for _ in range(10):
            classical = ModelParams(
                alpha=source.uniform(-10.0, 0.0),
                phi=source.uniform(-0.95, 0.98),
                sigma=source.uniform(0.05, 1.0),
                kind=ModelKind.CLASSICAL,
            )
            h_full = classical.alpha + source.standard_normal(30)
            r = np.exp(h_full[1:] / 2.0) * source.standard_normal(29)
            self.assertEqual(
                log_likelihood(classical.with_values(kind=ModelKind.CORRELATED), h_full, r),
                log_likelihood(classical, h_full, r),
            )

    def test_separate_initial_state(self):
        joined = log_likelihood(MEAN_CORRECTED, self.h_full, self.r)
        split = log_likelihood(MEAN_CORRECTED, self.h_full[1:], self.r, h0=self.h_full[0])
        self.assertEqual(joined, split)

    def test_single_observation(self):
        value = measurement_log_likelihood(CLASSICAL, [0.0], [0.0])
        self.assertAlmostEqual(-2.0 * value, math.log(2.0 * math.pi), places=12)

    def test_initial_state_required_with_correlation(self):
        with self.assertRaises(LengthMismatch):
            measurement_log_likelihood(MEAN_CORRECTED, self.h_full[1:], self.r)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatch):
            log_likelihood(MEAN_CORRECTED, self.h_full[:4], self.r)

    def test_non_finite(self):
        r = self.r.copy()
        r[2] = np.nan
        with self.assertRaises(NonFiniteLikelihood):
            log_likelihood(MEAN_CORRECTED, self.h_full, r)


class TestChainConfig(unittest.TestCase):
    """체인 설정 테스트"""

    def test_defaults(self):
        config = ChainConfig()
        self.assertEqual(config.retained, 3000)
        self.assertEqual(config.adaptation_window, 30_000)

    def test_retained_iterations(self):
        config = ChainConfig(total_iters=20, burn_in=10, thin=5)
        retained = [i for i in range(20) if config.is_retained(i)]
        self.assertEqual(retained, [14, 19])
        self.assertEqual(config.retained, 2)

    def test_invalid(self):
        with self.assertRaises(ChainConfigError):
            ChainConfig(total_iters=10, burn_in=10)
        with self.assertRaises(ChainConfigError):
            ChainConfig(total_iters=10, burn_in=5, thin=6)
        with self.assertRaises(ChainConfigError):
            ChainConfig(total_iters=10, burn_in=5, thin=0)
        with self.assertRaises(ChainConfigError):
            ChainConfig(total_iters=10, burn_in=5, thin=1, adapt_iters=6)

    def test_chain_seeds(self):
        self.assertEqual(chain_seeds(42, 1), [42])
        seeds = chain_seeds(42, 3)
        self.assertEqual(len(set(seeds)), 3)
        self.assertEqual(seeds, chain_seeds(42, 3))
        with self.assertRaises(ChainConfigError):
            chain_seeds(42, 0)


class TestSamplePosterior(unittest.TestCase):
    """짧은 체인 샘플링 테스트"""

    @classmethod
    def setUpClass(cls):
        cls.returns = simulate_path(MEAN_CORRECTED, SimConfig(horizon=150, seed=31)).returns
        cls.config = ChainConfig(total_iters=400, burn_in=200, thin=4, seed=77)

    def test_shapes_and_iterations(self):
        chain = sample_posterior(self.returns, ModelKind.MEAN_CORRECTED, config=self.config)
        self.assertEqual(len(chain), 50)
        self.assertEqual(chain.iterations[0], 204)
        self.assertEqual(chain.iterations[-1], 400)
        self.assertEqual(chain.h_draws.shape, (50, 150))
        self.assertEqual(chain.h0_draws.shape, (50,))
        self.assertEqual(set(chain.acceptance_rates), {"alpha", "phi", "sigma", "rho", "h"})
        self.assertTrue(all(0.0 <= v <= 1.0 for v in chain.acceptance_rates.values()))
        self.assertTrue(np.all(np.abs(chain.phi) < 1.0))
        self.assertTrue(np.all(chain.sigma > 0.0))

    def test_mu_and_deviance_per_draw(self):
        chain = sample_posterior(self.returns, ModelKind.MEAN_CORRECTED, config=self.config)
        for i in (0, len(chain) - 1):
            params = chain.params_at(i)
            self.assertAlmostEqual(chain.mu[i], mean_correction(params), places=15)
            expected = -2.0 * measurement_log_likelihood(
                params, chain.h_draws[i], self.returns, h0=chain.h0_draws[i]
            )
            self.assertAlmostEqual(chain.deviance[i], expected, places=6)

    def test_reproducible(self):
        first = sample_posterior(self.returns, ModelKind.CORRELATED, config=self.config)
        second = sample_posterior(self.returns, ModelKind.CORRELATED, config=self.config)
        np.testing.assert_array_equal(first.alpha, second.alpha)
        np.testing.assert_array_equal(first.h_draws, second.h_draws)
        self.assertTrue(np.all(first.mu == 0.0))

    def test_classical_fixes_rho(self):
        chain = sample_posterior(self.returns, ModelKind.CLASSICAL, config=self.config, store_latent=False)
        self.assertTrue(np.all(chain.rho == 0.0))
        self.assertNotIn("rho", chain.acceptance_rates)
        self.assertIsNone(chain.h_draws)
        self.assertEqual(list(posterior_summary(chain)["parameter"]), ["alpha", "phi", "sigma"])

    def test_progress_callback(self):
        calls = []
        config = ChainConfig(total_iters=20, burn_in=10, thin=5, seed=1)
        sample_posterior(self.returns, "svm0", config=config, progress=lambda d, t: calls.append(d))
        self.assertEqual(calls, list(range(1, 21)))

    def test_insufficient_data(self):
        with self.assertRaises(InsufficientData):
            sample_posterior(self.returns[:5], ModelKind.CLASSICAL, config=self.config)

    def test_constant_returns(self):
        with self.assertRaises(NonFiniteLikelihood):
            sample_posterior(np.zeros(20), ModelKind.CLASSICAL, config=self.config)

    def test_frame_round_trip(self):
        chain = sample_posterior(self.returns, ModelKind.MEAN_CORRECTED, config=self.config)
        frame = chain.to_frame()
        self.assertEqual(
            list(frame.columns), ["iteration", "alpha", "phi", "sigma", "rho", "mu", "deviance"]
        )
        restored = PosteriorChain.from_frame(frame, ModelKind.MEAN_CORRECTED)
        np.testing.assert_array_equal(restored.sigma, chain.sigma)
        self.assertIsNone(restored.h_draws)
        with self.assertRaises(ValueError):
            PosteriorChain.from_frame(pd.DataFrame({"alpha": [1.0]}), ModelKind.CLASSICAL)

    def test_latent_summary(self):
        chain = sample_posterior(self.returns, ModelKind.CLASSICAL, config=self.config)
        latent = chain.latent_summary()
        self.assertEqual(list(latent.columns), ["t", "h_mean", "h_sd"])
        self.assertEqual(len(latent), 150)
        np.testing.assert_allclose(latent["h_mean"], chain.posterior_mean_path())

    def test_sample_chains(self):
        chains = sample_chains(self.returns, ModelKind.CLASSICAL, config=self.config, n_chains=2)
        self.assertEqual([c.seed for c in chains], chain_seeds(77, 2))
        self.assertFalse(np.array_equal(chains[0].alpha, chains[1].alpha))


class TestAdaptation(unittest.TestCase):
    """적응 이후 채택률 테스트"""

    def test_acceptance_rates_after_adaptation(self):
        returns = simulate_path(MEAN_CORRECTED, SimConfig(horizon=300, seed=4)).returns
        config = ChainConfig(total_iters=3000, burn_in=1500, thin=10, seed=8)
        chain = sample_posterior(returns, ModelKind.MEAN_CORRECTED, config=config, store_latent=False)
        for block, rate in chain.acceptance_rates.items():
            self.assertTrue(0.1 <= rate <= 0.6, msg=f"{block}: {rate}")


@pytest.mark.slow
class TestParameterRecovery(unittest.TestCase):
    """모의 자료에서 모수 복원"""

    def test_classical_recovery(self):
        returns = simulate_path(CLASSICAL, SimConfig(horizon=1000, seed=2024)).returns
        config = ChainConfig(total_iters=30_000, burn_in=10_000, thin=10, seed=5)
        chain = sample_posterior(returns, ModelKind.CLASSICAL, config=config, store_latent=False)
        summary = posterior_summary(chain).set_index("parameter")
        for name in ("alpha", "phi", "sigma"):
            mean, sd = summary.loc[name, "mean"], summary.loc[name, "sd"]
            self.assertLess(abs(mean - getattr(CLASSICAL, name)), 3.0 * sd, msg=name)

    def test_coverage_across_seeds(self):
        """20개 시드 각각에서 참값이 사후 평균 +- 3 sd 안에 드는 비율 (모수별)"""
        config = ChainConfig(total_iters=18_000, burn_in=3_000, thin=5)
        names = ("alpha", "phi", "sigma", "rho")
        covered = dict.fromkeys(names, 0)
        n_seeds = 20
        for seed in range(n_seeds):
            returns = simulate_path(MEAN_CORRECTED, SimConfig(horizon=1000, seed=1000 + seed)).returns
            chain = sample_posterior(
                returns, ModelKind.MEAN_CORRECTED, config=config.with_seed(seed), store_latent=False
            )
            summary = posterior_summary(chain).set_index("parameter")
            for name in names:
                mean, sd = summary.loc[name, "mean"], summary.loc[name, "sd"]
                covered[name] += int(abs(mean - getattr(MEAN_CORRECTED, name)) <= 3.0 * sd)
        for name in names:
            self.assertGreaterEqual(covered[name] / n_seeds, 0.9, msg=f"{name}: {covered[name]}/{n_seeds}")
