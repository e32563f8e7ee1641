"""
설정 모듈 단위 테스트
"""
import os
import tempfile
from unittest import TestCase, mock

import pytest
import yaml

from svmc.core.config import (
    ConfigValidationError,
    RunConfig,
    apply_overrides,
    generate_default_config,
    load_config,
)
from svmc.models.core import ModelKind
from svmc.simulation.simulate import InitMode


class TestConfig(TestCase):
    """설정 파일 로드 및 검증 테스트"""

    def write_config(self, config_dict):
        with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
            yaml.dump(config_dict, f)
            return f.name

    def test_valid_config(self):
        """유효한 설정 파일이 올바르게 로드되는지 검증"""
        config_path = self.write_config({
            "version": 1,
            "model": {"kind": "svmrho", "alpha": -8.0, "phi": 0.95, "sigma": 0.2, "rho": -0.3},
            "chain": {"total_iters": 1000, "burn_in": 200, "thin": 4, "seed": 7},
            "priors": {"phi_a": 10.0},
            "threads": 2,
        })
        try:
            config = load_config(config_path)
            self.assertIs(config.model.kind, ModelKind.CORRELATED)
            self.assertEqual(config.model.rho, -0.3)
            self.assertEqual(config.chain.to_chain_config().retained, 200)
            self.assertEqual(config.priors.to_priors().phi_a, 10.0)
            self.assertEqual(config.priors.to_priors().phi_b, 1.5)
            self.assertEqual(config.threads, 2)
        finally:
            os.unlink(config_path)

    def test_defaults(self):
        config = RunConfig()
        params = config.model.to_params()
        self.assertEqual((params.alpha, params.phi, params.sigma, params.rho), (-7.88, 0.96, 0.18, 0.105))
        self.assertEqual(config.chain.total_iters, 180_000)
        self.assertEqual(config.chain.burn_in, 30_000)
        self.assertEqual(config.chain.thin, 50)
        self.assertEqual(config.gof.lags, [0, -10])

    def test_empty_file_uses_defaults(self):
        with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
            config_path = f.name
        try:
            self.assertEqual(load_config(config_path).snapshot(), RunConfig().snapshot())
        finally:
            os.unlink(config_path)

    def test_unknown_key(self):
        config_path = self.write_config({"model": {"kind": "svm0", "gamma": 1.0}})
        try:
            with pytest.raises(ConfigValidationError):
                load_config(config_path)
        finally:
            os.unlink(config_path)

    def test_classical_with_rho(self):
        config_path = self.write_config({"model": {"kind": "svm0", "rho": 0.2}})
        try:
            with pytest.raises(ConfigValidationError):
                load_config(config_path)
        finally:
            os.unlink(config_path)

    def test_invalid_chain(self):
        config_path = self.write_config({"chain": {"total_iters": 100, "burn_in": 100}})
        try:
            with pytest.raises(ConfigValidationError):
                load_config(config_path)
        finally:
            os.unlink(config_path)

    def test_env_var_expansion(self):
        config_path = self.write_config({"logging": {"file": "${SVMC_TEST_LOG}"}})
        try:
            with mock.patch.dict(os.environ, {"SVMC_TEST_LOG": "svmc.log"}):
                self.assertEqual(load_config(config_path).logging.file, "svmc.log")
        finally:
            os.unlink(config_path)

    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            load_config("/non/existent/svmc.yaml")

    def test_generate_default_config_round_trip(self):
        config_path = self.write_config(generate_default_config())
        try:
            self.assertEqual(load_config(config_path).snapshot(), RunConfig().snapshot())
        finally:
            os.unlink(config_path)


class TestOverrides(TestCase):
    """명령줄 옵션 반영 테스트"""

    def test_none_values_ignored(self):
        self.assertEqual(apply_overrides(RunConfig(), alpha=None, seed=None).snapshot(), RunConfig().snapshot())

    def test_seed_applies_to_all_sections(self):
        config = apply_overrides(RunConfig(), seed=99)
        self.assertEqual(config.chain.seed, 99)
        self.assertEqual(config.simulation.seed, 99)
        self.assertEqual(config.verify.seed, 99)

    def test_model_switch_to_classical_resets_rho(self):
        config = apply_overrides(RunConfig(), model="svm0")
        self.assertIs(config.model.kind, ModelKind.CLASSICAL)
        self.assertEqual(config.model.rho, 0.0)

    def test_classical_with_explicit_rho_fails(self):
        with pytest.raises(ConfigValidationError):
            apply_overrides(RunConfig(), model="svm0", rho=0.3)

    def test_h0_sets_fixed_init(self):
        config = apply_overrides(RunConfig(), h0=-8.0, horizon=50, n_paths=2)
        self.assertIs(config.simulation.init, InitMode.FIXED)
        sim = config.simulation.to_sim_config()
        self.assertEqual((sim.h0, sim.horizon, sim.n_paths), (-8.0, 50, 2))

    def test_chain_flags(self):
        config = apply_overrides(RunConfig(), iters=600, burn=100, thin=5, chains=2, k_max=4)
        self.assertEqual(config.chain.to_chain_config().retained, 100)
        self.assertEqual(config.chain.n_chains, 2)
        self.assertEqual(config.gof.k_max, 4)

    def test_unknown_flag(self):
        with pytest.raises(ConfigValidationError):
            apply_overrides(RunConfig(), colour="red")

    def test_snapshot_is_plain_data(self):
        snapshot = RunConfig().snapshot()
        self.assertEqual(snapshot["model"]["kind"], "svmrhomu")
        self.assertEqual(snapshot["simulation"]["init"], "stationary")
