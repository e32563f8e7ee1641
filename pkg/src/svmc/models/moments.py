"""
닫힌 형태 적률 계산 모듈

평균 보정항, 분산, 3차/4차 중심 적률, 그리고 r_t 와 h_{t+-k} 사이의
선행-후행 공분산/상관을 계산합니다. 모든 식은 h_t 의 정상 MA(무한) 전개에
기반한 정상(무조건부) 적률이며, 지수들의 곱은 로그 공간에서 더한 뒤
마지막에 한 번만 지수화합니다.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from svmc.models.core import ModelKind, ModelParams, stationary_variance, validate


def _exp(log_value: float) -> float:
    # 극단적인 phi, sigma에서는 inf로 포화
    with np.errstate(over="ignore"):
        return float(np.exp(log_value))


def _signed_exp(sign: float, log_magnitude: float) -> float:
    if sign == 0.0:
        return 0.0
    return math.copysign(_exp(log_magnitude), sign)


def mean_correction(params: ModelParams) -> float:
    """평균 보정항 mu = -(rho sigma / 2) exp{alpha/2 + sigma^2 / (8 (1 - phi^2))}

    E[r_t | F_{t-1}] = 0 을 만드는 유일한 상수입니다.
    """
    s = stationary_variance(params)
    if params.rho == 0.0:
        return 0.0
    log_magnitude = math.log(abs(params.rho) * params.sigma / 2.0) + params.alpha / 2.0 + s / 8.0
    return _signed_exp(-params.rho, log_magnitude)


def expected_return(params: ModelParams) -> float:
    """모형 변형별 E[r_t]

    SVM0 와 SVMrhomu 는 0, SVMrho 는 -mu(Theta) 입니다.
    """
    if params.kind is ModelKind.CORRELATED:
        return -mean_correction(params)
    return 0.0


def variance(params: ModelParams) -> float:
    """r_t 의 분산

    exp{alpha + s/2} (1 + rho^2 sigma^2 - (rho^2 sigma^2 / 4) exp{-s/4}), s = sigma^2/(1-phi^2)
    """
    s = stationary_variance(params)
    x = params.rho ** 2 * params.sigma ** 2
    bracket = 1.0 + x - (x / 4.0) * math.exp(-s / 4.0)
    return _exp(params.alpha + s / 2.0 + math.log(bracket))


def third_moment(params: ModelParams) -> float:
    """r_t 의 3차 중심 적률 mu_3 (부호는 rho 와 같음)"""
    if params.rho == 0.0:
        return 0.0
    s = stationary_variance(params)
    x = params.rho ** 2 * params.sigma ** 2
    bracket = (
        3.0
        + 9.0 * x / 4.0
        + (x / 6.0) * math.exp(-3.0 * s / 4.0)
        - (1.0 + x) * math.exp(-s / 2.0)
    )
    log_magnitude = (
        math.log(1.5 * abs(params.rho) * params.sigma)
        + 1.5 * params.alpha
        + 9.0 * s / 8.0
        + math.log(bracket)
    )
    return _signed_exp(params.rho, log_magnitude)


def fourth_moment(params: ModelParams) -> float:
    """r_t 의 4차 중심 적률 mu_4"""
    s = stationary_variance(params)
    x = params.rho ** 2 * params.sigma ** 2
    bracket = (
        1.5 * x * (1.0 + x) * math.exp(-5.0 * s / 4.0)
        + (3.0 + 24.0 * x + 16.0 * x ** 2)
        - (3.0 / 16.0) * x ** 2 * math.exp(-1.5 * s)
        - 9.0 * x * (1.0 + 0.75 * x) * math.exp(-3.0 * s / 4.0)
    )
    return _exp(2.0 * params.alpha + 2.0 * s + math.log(bracket))


@dataclass(frozen=True)
class MomentSet:
    """닫힌 형태 적률 묶음 (첨도는 초과 첨도가 아닌 원 첨도)"""
    mu: float
    variance: float
    mu3: float
    mu4: float
    skewness: float
    kurtosis: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "mu": self.mu,
            "variance": self.variance,
            "mu3": self.mu3,
            "mu4": self.mu4,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


def moment_set(params: ModelParams) -> MomentSet:
    """평균 보정항, 분산, 3차/4차 적률과 왜도/첨도를 한 번에 계산"""
    validate(params)
    var = variance(params)
    mu3 = third_moment(params)
    mu4 = fourth_moment(params)
    return MomentSet(
        mu=mean_correction(params),
        variance=var,
        mu3=mu3,
        mu4=mu4,
        skewness=mu3 / var ** 1.5,
        kurtosis=mu4 / var ** 2,
    )


@dataclass(frozen=True)
class LeadLagProfile:
    """r_t 와 h_{t+-k} 의 선행-후행 공분산/상관

    부호 규약: k > 0 은 선행(h_{t+k}), k < 0 은 후행(h_{t-|k|}), k = 0 은 동시점.

    Attributes:
        sigma_rh: cov(r_t, h_t)
        phi: 지속성 (선행 감쇠율)
        c: sigma^2 / (4 (1 - phi^2))
        k_max: 직렬화할 최대 시차
        variance_r: r_t 의 분산
        variance_h: h_t 의 정상 분산
    """
    sigma_rh: float
    phi: float
    c: float
    k_max: int
    variance_r: float
    variance_h: float

    def lead_cov(self, k: int) -> float:
        """cov(r_t, h_{t+k}) = phi^k sigma_rh"""
        return self.phi ** k * self.sigma_rh

    def lag_cov(self, k: int) -> float:
        """cov(r_t, h_{t-k}) = sigma_rh phi^k c / (1 + c)"""
        return self.sigma_rh * self.phi ** k * self.c / (1.0 + self.c)

    def cov(self, k: int) -> float:
        if k == 0:
            return self.sigma_rh
        return self.lead_cov(k) if k > 0 else self.lag_cov(-k)

    def corr(self, k: int) -> float:
        return self.cov(k) / math.sqrt(self.variance_r * self.variance_h)

    def lead_corr(self, k: int) -> float:
        return self.corr(k)

    def lag_corr(self, k: int) -> float:
        return self.corr(-k)

    def lags(self) -> List[int]:
        return list(range(-self.k_max, self.k_max + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma_rh": self.sigma_rh,
            "k_max": self.k_max,
            "covariance": {str(k): self.cov(k) for k in self.lags()},
            "correlation": {str(k): self.corr(k) for k in self.lags()},
        }


def leadlag(params: ModelParams, k_max: int) -> LeadLagProfile:
    """선행-후행 공분산 프로파일

    sigma_rh = rho sigma exp{alpha/2 + s/8} (1 + s/4), s = sigma^2/(1-phi^2)

    Args:
        params: 유효한 모수
        k_max: 최대 시차 (>= 1)
    """
    validate(params)
    if k_max < 1:
        raise ValueError(f"k_max는 1 이상이어야 합니다: {k_max}")

    s = stationary_variance(params)
    c = s / 4.0
    if params.rho == 0.0:
        sigma_rh = 0.0
    else:
        log_magnitude = (
            math.log(abs(params.rho) * params.sigma)
            + params.alpha / 2.0
            + s / 8.0
            + math.log1p(c)
        )
        sigma_rh = _signed_exp(params.rho, log_magnitude)

    return LeadLagProfile(
        sigma_rh=sigma_rh,
        phi=params.phi,
        c=c,
        k_max=k_max,
        variance_r=variance(params),
        variance_h=s,
    )
