"""
사후 요약 단위 테스트
"""
import math
import unittest

import numpy as np

from svmc.inference.priors import Priors
from svmc.inference.sampler import ChainConfig, PosteriorChain
from svmc.inference.summary import (
    EmptyChain,
    gelman_rubin,
    plug_in_params,
    posterior_summary,
    summary_dict,
)
from svmc.models.core import ModelKind


def make_chain(kind=ModelKind.MEAN_CORRECTED, n=6, shift=0.0, seed=0):
    source = np.random.default_rng(seed)
    values = {
        "alpha": -7.9 + shift + 0.1 * source.standard_normal(n),
        "phi": 0.95 + 0.01 * source.standard_normal(n),
        "sigma": 0.2 + 0.01 * source.standard_normal(n),
        "rho": 0.1 + 0.05 * source.standard_normal(n) if kind.allows_correlation else np.zeros(n),
    }
    return PosteriorChain(
        kind=kind,
        mu=np.full(n, -1e-4),
        deviance=np.linspace(-5040.0, -5030.0, n),
        iterations=np.arange(1, n + 1),
        acceptance_rates={"alpha": 0.4},
        step_sizes={"alpha": 0.05},
        seed=seed,
        config=ChainConfig(total_iters=max(n, 1) + 1, burn_in=1, thin=1, seed=seed),
        **values,
    )


class TestPosteriorSummary(unittest.TestCase):
    """사후 요약 테스트"""

    def test_mean_and_sd(self):
        chain = make_chain()
        summary = posterior_summary(chain).set_index("parameter")
        self.assertEqual(list(summary.index), ["alpha", "phi", "sigma", "rho"])
        self.assertAlmostEqual(summary.loc["alpha", "mean"], float(np.mean(chain.alpha)), places=14)
        self.assertAlmostEqual(summary.loc["phi", "sd"], float(np.std(chain.phi, ddof=1)), places=14)

    def test_classical_rows(self):
        summary = posterior_summary(make_chain(ModelKind.CLASSICAL))
        self.assertEqual(list(summary["parameter"]), ["alpha", "phi", "sigma"])

    def test_single_draw_sd_is_nan(self):
        summary = posterior_summary(make_chain(n=1))
        self.assertTrue(summary["sd"].isna().all())

    def test_empty_chain(self):
        with self.assertRaises(EmptyChain):
            posterior_summary(make_chain(n=0))

    def test_plug_in(self):
        chain = make_chain()
        params = plug_in_params(chain)
        self.assertAlmostEqual(params.sigma, float(np.mean(chain.sigma)), places=14)
        self.assertIs(params.kind, ModelKind.MEAN_CORRECTED)
        self.assertEqual(plug_in_params(make_chain(ModelKind.CLASSICAL)).rho, 0.0)


class TestGelmanRubin(unittest.TestCase):
    """R-hat 테스트"""

    def test_similar_chains_near_one(self):
        chains = [make_chain(n=2000, seed=s) for s in range(3)]
        r_hat = gelman_rubin(chains)
        for name, value in r_hat.items():
            self.assertLess(abs(value - 1.0), 0.01, msg=name)

    def test_separated_chains(self):
        chains = [make_chain(n=200, seed=0), make_chain(n=200, shift=1.0, seed=1)]
        self.assertGreater(gelman_rubin(chains)["alpha"], 1.5)

    def test_constant_chain(self):
        chain = make_chain(ModelKind.CLASSICAL, n=10)
        chain.sigma = np.full(10, 0.2)
        self.assertTrue(math.isnan(gelman_rubin([chain, chain])["sigma"]))

    def test_invalid(self):
        with self.assertRaises(EmptyChain):
            gelman_rubin([])
        with self.assertRaises(EmptyChain):
            gelman_rubin([make_chain(n=3)])
        with self.assertRaises(ValueError):
            gelman_rubin([make_chain(n=10), make_chain(ModelKind.CLASSICAL, n=10)])


class TestSummaryDict(unittest.TestCase):
    """summary.json 내용 테스트"""

    def test_fields(self):
        chain = make_chain()
        data = summary_dict(chain, Priors())
        self.assertEqual(data["model"], "svmrhomu")
        self.assertEqual(data["draws"], 6)
        self.assertIn("rho", data["posterior"])
        self.assertAlmostEqual(data["mean_deviance"], -5035.0, places=9)
        self.assertEqual(data["chain"]["total_iters"], 7)
        self.assertEqual(data["priors"]["alpha_var"], 25.0)
        self.assertNotIn("r_hat", data)

    def test_extra_chains(self):
        data = summary_dict(make_chain(n=20, seed=1), Priors(), [make_chain(n=20, seed=2)])
        self.assertEqual(len(data["chains"]), 2)
        self.assertEqual(set(data["r_hat"]), {"alpha", "phi", "sigma", "rho"})
