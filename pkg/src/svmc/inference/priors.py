"""
사전분포 정의 모듈

alpha ~ N(m, v), (phi + 1)/2 ~ Beta(a, b), sigma^2 ~ InvGamma(shape, scale),
rho ~ U(-1, 1).

샘플러는 제약 없는 좌표 u = (alpha, atanh phi, log sigma, atanh rho) 위에서
움직이므로 변환의 야코비안을 포함한 로그 밀도도 제공합니다.
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np
from scipy import stats

from svmc.models.core import ModelKind, ModelParams

LOG_HALF = math.log(0.5)


class InferenceError(Exception):
    """추론 관련 오류의 기본 클래스"""
    pass


class PriorSupportViolation(InferenceError):
    """모수가 사전분포의 지지집합 밖에 있음"""
    pass


def log_one_minus_tanh_sq(u: float) -> float:
    """log(1 - tanh(u)^2) = -2 log cosh(u) 를 큰 |u| 에서도 안정적으로 계산"""
    a = abs(u)
    return 2.0 * (math.log(2.0) - a - math.log1p(math.exp(-2.0 * a)))


@dataclass(frozen=True)
class Priors:
    """사전분포 초모수

    Attributes:
        alpha_mean: alpha 정규 사전분포 평균
        alpha_var: alpha 정규 사전분포 분산
        phi_a: (phi+1)/2 베타 분포의 첫 번째 모수
        phi_b: (phi+1)/2 베타 분포의 두 번째 모수
        sigma_sq_shape: sigma^2 역감마 분포 형상 모수
        sigma_sq_scale: sigma^2 역감마 분포 척도 모수
    """
    alpha_mean: float = 0.0
    alpha_var: float = 25.0
    phi_a: float = 20.0
    phi_b: float = 1.5
    sigma_sq_shape: float = 2.5
    sigma_sq_scale: float = 0.025

    def __post_init__(self) -> None:
        for name in ("alpha_var", "phi_a", "phi_b", "sigma_sq_shape", "sigma_sq_scale"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name}는 양수여야 합니다: {value}")
        if not math.isfinite(self.alpha_mean):
            raise ValueError(f"alpha_mean이 유한하지 않습니다: {self.alpha_mean}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def log_density(self, params: ModelParams) -> float:
        """원래 척도의 결합 로그 사전밀도

        SVM0 에서는 rho 가 고정이므로 rho 항을 포함하지 않습니다.

        Raises:
            PriorSupportViolation: 모수가 지지집합 밖에 있는 경우
        """
        if not -1.0 < params.phi < 1.0:
            raise PriorSupportViolation(f"phi가 (-1, 1) 밖에 있습니다: {params.phi}")
        if params.sigma <= 0.0:
            raise PriorSupportViolation(f"sigma가 양수가 아닙니다: {params.sigma}")
        if not -1.0 < params.rho < 1.0:
            raise PriorSupportViolation(f"rho가 (-1, 1) 밖에 있습니다: {params.rho}")

        total = stats.norm.logpdf(params.alpha, self.alpha_mean, math.sqrt(self.alpha_var))
        total += stats.beta.logpdf((params.phi + 1.0) / 2.0, self.phi_a, self.phi_b) + LOG_HALF
        # sigma 밀도 = p(sigma^2) * 2 sigma
        total += (
            stats.invgamma.logpdf(params.sigma ** 2, self.sigma_sq_shape, scale=self.sigma_sq_scale)
            + math.log(2.0 * params.sigma)
        )
        if params.kind.allows_correlation:
            total += LOG_HALF
        return float(total)

    def log_density_unconstrained(self, u: np.ndarray, kind: ModelKind) -> float:
        """제약 없는 좌표 u 의 로그 사전밀도 (야코비안 포함)

        Args:
            u: [alpha, atanh(phi), log(sigma), atanh(rho)]
            kind: 모형 변형 (SVM0 이면 u[3] 무시)
        """
        alpha, z_phi, log_sigma, z_rho = (float(x) for x in u)
        phi = math.tanh(z_phi)
        sigma_sq = math.exp(2.0 * log_sigma)

        total = stats.norm.logpdf(alpha, self.alpha_mean, math.sqrt(self.alpha_var))
        total += (
            stats.beta.logpdf((phi + 1.0) / 2.0, self.phi_a, self.phi_b)
            + LOG_HALF
            + log_one_minus_tanh_sq(z_phi)
        )
        # d sigma^2 / d log sigma = 2 sigma^2
        total += (
            stats.invgamma.logpdf(sigma_sq, self.sigma_sq_shape, scale=self.sigma_sq_scale)
            + math.log(2.0)
            + 2.0 * log_sigma
        )
        if kind.allows_correlation:
            total += LOG_HALF + log_one_minus_tanh_sq(z_rho)
        return float(total)


def to_unconstrained(params: ModelParams) -> np.ndarray:
    """ModelParams -> [alpha, atanh(phi), log(sigma), atanh(rho)]"""
    return np.array([
        params.alpha,
        math.atanh(params.phi),
        math.log(params.sigma),
        math.atanh(params.rho),
    ])


def from_unconstrained(u: np.ndarray, kind: ModelKind) -> ModelParams:
    """제약 없는 좌표에서 ModelParams 복원 (SVM0 는 rho = 0)"""
    rho = math.tanh(float(u[3])) if kind.allows_correlation else 0.0
    return ModelParams(
        alpha=float(u[0]),
        phi=math.tanh(float(u[1])),
        sigma=math.exp(float(u[2])),
        rho=rho,
        kind=kind,
    )
