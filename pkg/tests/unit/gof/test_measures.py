"""
적합도 측정 단위 테스트
"""
import math
import unittest
from dataclasses import replace

import numpy as np

from svmc.gof.measures import (
    DegenerateSeries,
    TooShort,
    descriptive_stats,
    deviance,
    empirical_leadlag,
    gof_report,
    mean_deviance,
    mspe,
    predicted_return,
)
from svmc.inference.sampler import PosteriorChain, measurement_log_likelihood
from svmc.models.core import LengthMismatch, ModelKind, ModelParams
from svmc.models.moments import expected_return, moment_set


def make_chain(kind, T=12, n=5, seed=0, with_latent=True):
    source = np.random.default_rng(seed)
    rho = np.full(n, 0.1) if kind.allows_correlation else np.zeros(n)
    return PosteriorChain(
        kind=kind,
        alpha=np.full(n, -7.9) + 0.05 * source.standard_normal(n),
        phi=np.full(n, 0.95),
        sigma=np.full(n, 0.2),
        rho=rho,
        mu=np.linspace(-2e-4, -1e-4, n) if kind is ModelKind.MEAN_CORRECTED else np.zeros(n),
        deviance=np.full(n, -40.0),
        iterations=np.arange(1, n + 1),
        h_draws=-7.9 + 0.3 * source.standard_normal((n, T)) if with_latent else None,
        h0_draws=np.full(n, -7.9),
    )


class TestDescriptiveStats(unittest.TestCase):
    """기술통계 테스트"""

    def test_standard_normal(self):
        n = 1_000_000
        r = np.random.default_rng(3).standard_normal(n)
        result = descriptive_stats(r)
        self.assertLess(abs(result.mean), 4.0 / math.sqrt(n))
        self.assertLess(abs(result.variance - 1.0), 4.0 * math.sqrt(2.0 / n))
        self.assertLess(abs(result.skewness), 4.0 * math.sqrt(6.0 / n))
        self.assertLess(abs(result.kurtosis - 3.0), 4.0 * math.sqrt(24.0 / n))
        self.assertEqual(result.n, n)

    def test_population_normalization(self):
        result = descriptive_stats([1.0, 2.0, 3.0, 4.0])
        self.assertEqual(result.mean, 2.5)
        self.assertEqual(result.variance, 1.25)
        self.assertEqual(result.skewness, 0.0)
        self.assertAlmostEqual(result.kurtosis, (2 * 1.5 ** 4 + 2 * 0.5 ** 4) / 4 / 1.25 ** 2, places=12)

    def test_location_scale_equivariance(self):
        r = np.random.default_rng(17).lognormal(0.0, 0.5, 5000)
        base = descriptive_stats(r)
        for a, b in ((0.3, 2.5), (-1.2, -0.7), (0.0, -1.0)):
            moved = descriptive_stats(a + b * r)
            with self.subTest(a=a, b=b):
                self.assertAlmostEqual(moved.mean, a + b * base.mean, delta=1e-10 * abs(a + b * base.mean))
                self.assertAlmostEqual(moved.variance, b ** 2 * base.variance, delta=1e-10 * b ** 2 * base.variance)
                self.assertAlmostEqual(
                    moved.skewness, math.copysign(1.0, b) * base.skewness, delta=1e-10 * abs(base.skewness)
                )
                self.assertAlmostEqual(moved.kurtosis, base.kurtosis, delta=1e-10 * base.kurtosis)
        self.assertGreater(base.skewness, 0.5)

    def test_errors(self):
        with self.assertRaises(TooShort):
            descriptive_stats([1.0, 2.0, 3.0])
        with self.assertRaises(DegenerateSeries):
            descriptive_stats([0.5] * 10)


class TestDeviance(unittest.TestCase):
    """이탈도 테스트"""

    def test_single_observation(self):
        params = ModelParams(alpha=0.0, phi=0.5, sigma=0.3, rho=0.0, kind=ModelKind.CLASSICAL)
        self.assertAlmostEqual(deviance(params, [0.0], [0.0]), math.log(2.0 * math.pi), places=12)

    def test_mean_deviance_recomputes_from_latent_draws(self):
        chain = make_chain(ModelKind.MEAN_CORRECTED)
        r = 0.02 * np.random.default_rng(1).standard_normal(12)
        expected = np.mean([
            -2.0 * measurement_log_likelihood(chain.params_at(i), chain.h_draws[i], r, h0=-7.9)
            for i in range(len(chain))
        ])
        self.assertAlmostEqual(mean_deviance(chain, r), expected, places=9)

    def test_mean_deviance_uses_stored_values_without_latent(self):
        chain = make_chain(ModelKind.CLASSICAL, with_latent=False)
        self.assertEqual(mean_deviance(chain, np.zeros(12)), -40.0)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatch):
            mean_deviance(make_chain(ModelKind.CLASSICAL), np.zeros(11))


class TestPrediction(unittest.TestCase):
    """예측 오차 테스트"""

    def test_mean_corrected_predicts_mu(self):
        chain = make_chain(ModelKind.MEAN_CORRECTED)
        self.assertAlmostEqual(predicted_return(chain), -1.5e-4, places=15)
        r = np.array([0.01, -0.02, 0.0])
        self.assertAlmostEqual(mspe(chain, r), float(np.mean((r + 1.5e-4) ** 2)), places=15)

    def test_other_models_predict_zero(self):
        r = np.array([0.01, -0.02, 0.0])
        for kind in (ModelKind.CLASSICAL, ModelKind.CORRELATED):
            chain = make_chain(kind)
            self.assertEqual(predicted_return(chain), 0.0)
            self.assertAlmostEqual(mspe(chain, r), float(np.mean(r ** 2)), places=15)

    def test_invariant_to_draw_order(self):
        r = 0.02 * np.random.default_rng(4).standard_normal(12)
        for kind in ModelKind:
            chain = make_chain(kind, n=9, seed=6)
            order = np.random.default_rng(8).permutation(len(chain))
            shuffled = replace(
                chain,
                alpha=chain.alpha[order],
                phi=chain.phi[order],
                sigma=chain.sigma[order],
                rho=chain.rho[order],
                mu=chain.mu[order],
                deviance=chain.deviance[order],
                iterations=chain.iterations[order],
                h_draws=chain.h_draws[order],
                h0_draws=chain.h0_draws[order],
            )
            with self.subTest(kind=kind):
                expected = mspe(chain, r)
                self.assertAlmostEqual(mspe(shuffled, r), expected, delta=1e-12 * expected)
                expected = mean_deviance(chain, r)
                self.assertAlmostEqual(mean_deviance(shuffled, r), expected, delta=1e-10 * abs(expected))


class TestEmpiricalLeadLag(unittest.TestCase):
    """경험적 선행-후행 상관 테스트"""

    def test_shifted_series(self):
        source = np.random.default_rng(5)
        r = source.standard_normal(200)
        h = np.empty(200)
        h[1:] = r[:-1]
        h[0] = 0.0
        result = empirical_leadlag(r, h, 2)
        self.assertEqual(sorted(result), [-2, -1, 0, 1, 2])
        self.assertAlmostEqual(result[1], 1.0, places=12)
        self.assertLess(abs(result[0]), 0.3)

    def test_lag_sign(self):
        r = np.random.default_rng(6).standard_normal(100)
        h = np.empty(100)
        h[:-1] = r[1:]
        h[-1] = 0.0
        self.assertAlmostEqual(empirical_leadlag(r, h, 1)[-1], 1.0, places=12)

    def test_invalid(self):
        with self.assertRaises(LengthMismatch):
            empirical_leadlag(np.zeros(5), np.zeros(4), 1)
        with self.assertRaises(ValueError):
            empirical_leadlag(np.ones(5), np.ones(5), 5)


class TestGofReport(unittest.TestCase):
    """적합도 보고서 테스트"""

    def test_report_fields(self):
        chain = make_chain(ModelKind.CORRELATED)
        r = 0.02 * np.random.default_rng(2).standard_normal(12)
        report = gof_report(chain, r, k_max=3, lags=(0, -10))
        self.assertIs(report.kind, ModelKind.CORRELATED)
        self.assertEqual(sorted(report.model_leadlag), [-10, 0])
        self.assertEqual(sorted(report.empirical_leadlag), [-3, -2, -1, 0, 1, 2, 3])
        self.assertEqual(report.expected_return, expected_return(report.plug_in))
        self.assertEqual(report.model_moments, moment_set(report.plug_in))
        data = report.to_dict()
        self.assertEqual(data["model"], "svmrho")
        self.assertIn("-10", data["model_leadlag"])

    def test_explicit_path(self):
        chain = make_chain(ModelKind.CLASSICAL, with_latent=False)
        r = 0.02 * np.random.default_rng(2).standard_normal(12)
        report = gof_report(chain, r, k_max=2, h_path=np.linspace(-8.0, -7.0, 12))
        self.assertEqual(report.mean_deviance, -40.0)
        self.assertEqual(report.model_leadlag[0], 0.0)
