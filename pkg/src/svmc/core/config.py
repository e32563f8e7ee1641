"""
YAML 설정 파일 처리 모듈

우선순위: 기본값 < 설정 파일 < 명령줄 옵션
"""
import os
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from svmc.inference.priors import Priors
from svmc.inference.sampler import ChainConfig
from svmc.models.core import ModelKind, ModelParams
from svmc.simulation.oracle import VerifySettings
from svmc.simulation.simulate import InitMode, SimConfig
from svmc.utils.logging import LOG_LEVELS

MAX_SEED = 2 ** 64 - 1
DEFAULT_SEED = 20240401


class ConfigValidationError(Exception):
    """설정 파일 검증 오류"""
    pass


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSection(_Section):
    """모형 설정 (기본값은 S&P 500 자료의 SVMrhomu 사후 평균)"""
    kind: ModelKind = ModelKind.MEAN_CORRECTED
    alpha: float = -7.88
    phi: float = 0.96
    sigma: float = 0.18
    rho: float = 0.105

    @field_validator("kind", mode="before")
    @classmethod
    def _parse_kind(cls, value: Any) -> ModelKind:
        return ModelKind.parse(value)

    @model_validator(mode="after")
    def _check_kind(self) -> "ModelSection":
        if self.kind is ModelKind.CLASSICAL and self.rho != 0.0:
            raise ValueError(f"svm0 모형은 rho = 0 이어야 합니다: rho={self.rho}")
        return self

    def to_params(self) -> ModelParams:
        return ModelParams(
            alpha=self.alpha, phi=self.phi, sigma=self.sigma, rho=self.rho, kind=self.kind
        )


class PriorsSection(_Section):
    """사전분포 초모수"""
    alpha_mean: float = 0.0
    alpha_var: float = Field(25.0, gt=0)
    phi_a: float = Field(20.0, gt=0)
    phi_b: float = Field(1.5, gt=0)
    sigma_sq_shape: float = Field(2.5, gt=0)
    sigma_sq_scale: float = Field(0.025, gt=0)

    def to_priors(self) -> Priors:
        return Priors(**self.model_dump())


class ChainSection(_Section):
    """MCMC 체인 설정"""
    total_iters: int = Field(180_000, gt=0)
    burn_in: int = Field(30_000, ge=0)
    thin: int = Field(50, ge=1)
    adapt_iters: Optional[int] = Field(None, ge=0)
    seed: int = Field(DEFAULT_SEED, ge=0, le=MAX_SEED)
    n_chains: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_window(self) -> "ChainSection":
        if self.burn_in >= self.total_iters:
            raise ValueError(
                f"burn_in({self.burn_in})은 total_iters({self.total_iters})보다 작아야 합니다"
            )
        if (self.total_iters - self.burn_in) // self.thin < 1:
            raise ValueError("보존되는 표본이 없습니다 (thin이 너무 큼)")
        if self.adapt_iters is not None and self.adapt_iters > self.burn_in:
            raise ValueError(
                f"adapt_iters({self.adapt_iters})는 burn_in({self.burn_in}) 이하여야 합니다"
            )
        return self

    def to_chain_config(self) -> ChainConfig:
        return ChainConfig(
            total_iters=self.total_iters,
            burn_in=self.burn_in,
            thin=self.thin,
            seed=self.seed,
            adapt_iters=self.adapt_iters,
        )


class SimulationSection(_Section):
    """경로 시뮬레이션 설정"""
    n_paths: int = Field(1, ge=1)
    horizon: int = Field(1008, ge=1)
    seed: int = Field(DEFAULT_SEED, ge=0, le=MAX_SEED)
    init: InitMode = InitMode.STATIONARY
    h0: Optional[float] = None

    @model_validator(mode="after")
    def _check_init(self) -> "SimulationSection":
        if self.init is InitMode.FIXED and self.h0 is None:
            raise ValueError("init: fixed 에는 h0 값이 필요합니다")
        return self

    def to_sim_config(self) -> SimConfig:
        return SimConfig(
            n_paths=self.n_paths,
            horizon=self.horizon,
            seed=self.seed,
            init=self.init,
            h0=self.h0,
        )


class VerifySection(_Section):
    """몬테카를로 검증 설정"""
    n: int = Field(1_000_000, ge=10_000)
    n_heavy: int = Field(10_000_000, ge=10_000)
    k_max: int = Field(3, ge=1)
    tolerance_se: float = Field(4.0, gt=0)
    chunk_size: int = Field(250_000, ge=1_000)
    seed: int = Field(DEFAULT_SEED, ge=0, le=MAX_SEED)

    def to_settings(self) -> VerifySettings:
        return VerifySettings(**self.model_dump())


class GofSection(_Section):
    """적합도 보고 설정"""
    k_max: int = Field(10, ge=1)
    lags: List[int] = Field(default_factory=lambda: [0, -10])


class LoggingSection(_Section):
    """로깅 설정"""
    level: str = "INFO"
    file: Optional[str] = None
    directory: Optional[str] = None

    @field_validator("level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        if value.upper() not in LOG_LEVELS:
            raise ValueError(f"알 수 없는 로그 레벨: {value}. 사용 가능한 값: {', '.join(LOG_LEVELS)}")
        return value.upper()


class RunConfig(_Section):
    """전체 설정 파일 스키마"""
    version: int = 1
    model: ModelSection = Field(default_factory=ModelSection)
    priors: PriorsSection = Field(default_factory=PriorsSection)
    chain: ChainSection = Field(default_factory=ChainSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    verify: VerifySection = Field(default_factory=VerifySection)
    gof: GofSection = Field(default_factory=GofSection)
    logging: LoggingSection = Field(default_factory=LoggingSection)
    threads: int = Field(1, ge=1)

    def snapshot(self) -> Dict[str, Any]:
        """매니페스트에 기록할 JSON 호환 딕셔너리"""
        return self.model_dump(mode="json")


def _expand_env_vars(value: Any) -> Any:
    """${ENV_VAR} 형태의 문자열을 환경 변수 값으로 확장 (없으면 그대로)"""
    if isinstance(value, dict):
        return {key: _expand_env_vars(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_expand_env_vars(item) for item in value]
    if isinstance(value, str) and value.startswith("${") and value.endswith("}"):
        return os.environ.get(value[2:-1], value)
    return value


def _validate(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigValidationError(f"설정 스키마 검증 실패: {e}")


def load_config(config_path: str) -> RunConfig:
    """YAML 설정 파일 로드 및 검증

    Args:
        config_path: YAML 설정 파일 경로

    Returns:
        검증된 설정 객체

    Raises:
        FileNotFoundError: 설정 파일을 찾을 수 없는 경우
        yaml.YAMLError: YAML 파싱 오류
        ConfigValidationError: 스키마 검증 실패
    """
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config_dict = yaml.safe_load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"설정 파일을 찾을 수 없습니다: {config_path}")
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"YAML 파싱 오류: {e}")

    if config_dict is None:
        config_dict = {}
    if not isinstance(config_dict, dict):
        raise ConfigValidationError(f"설정 파일의 최상위는 매핑이어야 합니다: {config_path}")

    return _validate(_expand_env_vars(config_dict))


# 명령줄 옵션 -> 설정 경로
_OVERRIDES = {
    "model": [("model", "kind")],
    "alpha": [("model", "alpha")],
    "phi": [("model", "phi")],
    "sigma": [("model", "sigma")],
    "rho": [("model", "rho")],
    "seed": [("chain", "seed"), ("simulation", "seed"), ("verify", "seed")],
    "iters": [("chain", "total_iters")],
    "burn": [("chain", "burn_in")],
    "thin": [("chain", "thin")],
    "chains": [("chain", "n_chains")],
    "n_paths": [("simulation", "n_paths")],
    "horizon": [("simulation", "horizon")],
    "h0": [("simulation", "h0")],
    "n": [("verify", "n")],
    "k_max": [("gof", "k_max")],
    "log_level": [("logging", "level")],
    "log_file": [("logging", "file")],
}


def apply_overrides(config: RunConfig, **flags: Any) -> RunConfig:
    """명령줄 옵션을 설정에 반영 (None 값은 무시)

    --model svm0 으로 바꾸면서 --rho 를 주지 않으면 rho 는 0 이 됩니다.
    --h0 를 주면 simulation.init 이 fixed 가 됩니다.

    Raises:
        ConfigValidationError: 알 수 없는 옵션이나 검증 실패
    """
    data = config.model_dump()
    for name, value in flags.items():
        if value is None:
            continue
        if name == "threads":
            data["threads"] = value
            continue
        if name not in _OVERRIDES:
            raise ConfigValidationError(f"알 수 없는 설정 옵션: {name}")
        for section, key in _OVERRIDES[name]:
            data[section][key] = value

    if flags.get("model") is not None and flags.get("rho") is None:
        if ModelKind.parse(flags["model"]) is ModelKind.CLASSICAL:
            data["model"]["rho"] = 0.0
    if flags.get("h0") is not None:
        data["simulation"]["init"] = InitMode.FIXED

    return _validate(data)


def generate_default_config() -> Dict[str, Any]:
    """기본 설정 생성

    Returns:
        기본 설정 딕셔너리
    """
    return RunConfig().snapshot()
