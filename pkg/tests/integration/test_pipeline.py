"""
파이프라인 통합 테스트: simulate -> fit -> gof -> report
"""
import os

import numpy as np
import pandas as pd
import pytest

from svmc.core.config import RunConfig, apply_overrides
from svmc.core.context import FIT_ARTIFACTS, ExecutionStatus, file_digest
from svmc.core.pipeline import Pipeline, load_fit
from svmc.loaders.csv import read_csv
from svmc.loaders.json import read_json
from svmc.models.core import ModelKind
from svmc.utils.logging import configure_logging


# 테스트 시작 전 로깅 설정
configure_logging(level="INFO")


@pytest.fixture(scope="module")
def simulated(tmp_path_factory):
    """기본 모수에서 T=200 경로 하나를 시뮬레이션한 디렉토리"""
    out_dir = str(tmp_path_factory.mktemp("simulate"))
    config = apply_overrides(RunConfig(), horizon=200, n_paths=1, seed=2024)
    pipeline = Pipeline(config, out_dir)
    pipeline.simulate()
    assert pipeline.context.status == ExecutionStatus.SUCCEEDED
    return out_dir


@pytest.fixture(scope="module")
def fits(simulated, tmp_path_factory):
    """세 모형 변형의 적합 결과 디렉토리"""
    data_path = os.path.join(simulated, "paths.csv")
    result = {}
    for kind in ModelKind:
        out_dir = str(tmp_path_factory.mktemp(f"fit-{kind.value}"))
        config = apply_overrides(RunConfig(), model=kind.value, iters=1800, burn=300, thin=5, seed=31)
        Pipeline(config, out_dir).fit(data_path, mode="returns")
        result[kind] = out_dir
    return result


def test_simulate_artifacts(simulated):
    paths = pd.read_csv(os.path.join(simulated, "paths.csv"))
    assert list(paths.columns) == ["t", "r", "h"]
    assert len(paths) == 200
    manifest = read_json(os.path.join(simulated, "manifest.json"))
    assert manifest["command"] == "simulate"
    assert manifest["seed"] == 2024
    assert manifest["status"] == "succeeded"


def test_fit_artifacts(fits):
    for kind, fit_dir in fits.items():
        summary = read_json(os.path.join(fit_dir, "summary.json"))
        assert summary["model"] == kind.value
        assert summary["draws"] == 300
        assert set(summary["posterior"]) >= {"alpha", "phi", "sigma"}

        chain = pd.read_csv(os.path.join(fit_dir, "chain.csv"))
        assert len(chain) == 300
        assert np.all(np.abs(chain["phi"]) < 1)
        assert np.all(chain["sigma"] > 0)
        if kind is ModelKind.CLASSICAL:
            assert np.all(chain["rho"] == 0.0)
        else:
            assert np.all(np.abs(chain["rho"]) < 1)

        latent = pd.read_csv(os.path.join(fit_dir, "latent.csv"))
        assert len(latent) == 200

        manifest = read_json(os.path.join(fit_dir, "manifest.json"))
        assert manifest["input"]["sha256"] is not None
        assert manifest["status"] == "succeeded"


def test_chain_file_round_trip(fits):
    fit_dir = fits[ModelKind.MEAN_CORRECTED]
    chain, h_path = load_fit(fit_dir)
    frame = read_csv(os.path.join(fit_dir, "chain.csv"))
    for column in ("alpha", "phi", "sigma", "rho", "mu", "deviance"):
        np.testing.assert_array_equal(getattr(chain, column), frame[column].to_numpy())
    assert chain.kind is ModelKind.MEAN_CORRECTED
    assert h_path.shape == (200,)


def test_fit_reproducible(simulated, tmp_path):
    data_path = os.path.join(simulated, "paths.csv")
    config = apply_overrides(RunConfig(), model="svmrho", iters=300, burn=100, thin=4, seed=8)
    texts = []
    for name in ("a", "b"):
        out_dir = str(tmp_path / name)
        Pipeline(config, out_dir).fit(data_path, mode="returns")
        with open(os.path.join(out_dir, "chain.csv"), "r", encoding="utf-8") as f:
            texts.append(f.read())
    assert texts[0] == texts[1]


def test_gof_and_report(simulated, fits, tmp_path):
    data_path = os.path.join(simulated, "paths.csv")
    config = apply_overrides(RunConfig(), k_max=5)

    gof_dir = str(tmp_path / "gof")
    report = Pipeline(config, gof_dir).gof(data_path, fits[ModelKind.CORRELATED], mode="returns")
    assert report.kind is ModelKind.CORRELATED
    assert np.isfinite(report.mean_deviance)
    assert os.path.exists(os.path.join(gof_dir, "gof.txt"))
    manifest = read_json(os.path.join(gof_dir, "manifest.json"))
    fit_dir = fits[ModelKind.CORRELATED]
    assert [fit["path"] for fit in manifest["fits"]] == [os.path.abspath(fit_dir)]
    for name in FIT_ARTIFACTS:
        assert manifest["fits"][0]["sha256"][name] == file_digest(os.path.join(fit_dir, name))

    report_dir = str(tmp_path / "report")
    result = Pipeline(config, report_dir).report(data_path, list(fits.values()), mode="returns")
    assert set(result["gof"]) == {"svm0", "svmrho", "svmrhomu"}
    assert set(result["posterior"]) == {"svm0", "svmrho", "svmrhomu"}
    with open(os.path.join(report_dir, "report.txt"), "r", encoding="utf-8") as f:
        text = f.read()
    assert "Posterior means (sd)" in text
    assert "Goodness of fit" in text
    manifest = read_json(os.path.join(report_dir, "manifest.json"))
    assert [fit["path"] for fit in manifest["fits"]] == [os.path.abspath(d) for d in fits.values()]
    assert all(None not in fit["sha256"].values() for fit in manifest["fits"])


def test_failed_run_writes_manifest(simulated, tmp_path):
    out_dir = str(tmp_path / "gof")
    with pytest.raises(FileNotFoundError):
        Pipeline(RunConfig(), out_dir).gof(
            os.path.join(simulated, "paths.csv"), str(tmp_path), mode="returns"
        )
    manifest = read_json(os.path.join(out_dir, "manifest.json"))
    assert manifest["status"] == "failed"
