"""
적합도 측정 모듈

표본 기술통계, 이탈도(deviance), 평균 제곱 예측 오차(MSPE), 경험적
선행-후행 상관을 계산합니다.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional

import numpy as np

from svmc.inference.sampler import PosteriorChain, measurement_log_likelihood
from svmc.inference.summary import EmptyChain, plug_in_params
from svmc.models.core import LengthMismatch, ModelKind, ModelParams
from svmc.models.moments import MomentSet, expected_return, leadlag, moment_set

MIN_LENGTH = 4


class GofError(ValueError):
    """적합도 계산 오류의 기본 클래스"""
    pass


class TooShort(GofError):
    """표본이 너무 짧음"""
    pass


class DegenerateSeries(GofError):
    """분산이 0인 시계열 (왜도/첨도 정의 불가)"""
    pass


@dataclass(frozen=True)
class DescriptiveStats:
    """1/n 정규화 표본 적률 (첨도는 원 첨도)"""
    mean: float
    variance: float
    skewness: float
    kurtosis: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
        }


def descriptive_stats(returns: Any) -> DescriptiveStats:
    """평균, 분산, 왜도 m3/m2^1.5, 첨도 m4/m2^2

    Raises:
        TooShort: 길이 < 4
        DegenerateSeries: 분산이 0
    """
    r = np.asarray(returns, dtype=float)
    if r.shape[0] < MIN_LENGTH:
        raise TooShort(f"기술통계에는 {MIN_LENGTH}개 이상의 관측이 필요합니다: {r.shape[0]}")

    mean = float(np.mean(r))
    d = r - mean
    m2 = float(np.mean(d ** 2))
    if m2 == 0.0:
        raise DegenerateSeries("분산이 0이므로 왜도와 첨도를 정의할 수 없습니다")
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    return DescriptiveStats(
        mean=mean,
        variance=m2,
        skewness=m3 / m2 ** 1.5,
        kurtosis=m4 / m2 ** 2,
        n=int(r.shape[0]),
    )


def deviance(params: ModelParams, h: Any, returns: Any, h0: Optional[float] = None) -> float:
    """D = -2 log f(r | Theta, H) (log g(r) = 0)

    측정 밀도만 사용하고 h 전이 밀도는 포함하지 않습니다.
    """
    return -2.0 * measurement_log_likelihood(params, h, returns, h0=h0)


def mean_deviance(chain: PosteriorChain, returns: Any) -> float:
    """보존된 (Theta, H) 표본에 대한 이탈도 평균

    잠재 경로 표본이 있으면 주어진 수익률로 다시 계산하고, 없으면 체인에
    기록된 이탈도를 사용합니다.
    """
    if len(chain) == 0:
        raise EmptyChain("보존된 표본이 없는 체인입니다")
    if chain.h_draws is None:
        return float(np.mean(chain.deviance))

    r = np.asarray(returns, dtype=float)
    if chain.h_draws.shape[1] != r.shape[0]:
        raise LengthMismatch(
            f"잠재 경로 길이({chain.h_draws.shape[1]})가 수익률 길이({r.shape[0]})와 다릅니다"
        )
    values = [
        deviance(chain.params_at(i), chain.h_draws[i], r, h0=float(chain.h0_draws[i]))
        for i in range(len(chain))
    ]
    return float(np.mean(values))


def predicted_return(chain: PosteriorChain) -> float:
    """한 시점 앞 수익률 예측값: SVMrhomu 는 mu 의 사후 평균, 나머지는 0"""
    if len(chain) == 0:
        raise EmptyChain("보존된 표본이 없는 체인입니다")
    if chain.kind is ModelKind.MEAN_CORRECTED:
        return float(np.mean(chain.mu))
    return 0.0


def mspe(chain: PosteriorChain, returns: Any) -> float:
    """(1/T) sum_t (r_t - r_hat)^2"""
    r = np.asarray(returns, dtype=float)
    residual = r - predicted_return(chain)
    return float(np.mean(residual ** 2))


def _correlation(x: np.ndarray, y: np.ndarray) -> float:
    if x.shape[0] < 2 or np.std(x) == 0.0 or np.std(y) == 0.0:
        return float("nan")
    return float(np.corrcoef(x, y)[0, 1])


def empirical_leadlag(returns: Any, h_path: Any, k_max: int) -> Dict[int, float]:
    """r_t 와 h_{t+k} 의 표본 상관 (k = -k_max..k_max)

    k > 0 은 선행 h_{t+k}, k < 0 은 후행 h_{t-|k|} 입니다.

    Raises:
        LengthMismatch: 길이 불일치
        ValueError: k_max 가 0 미만이거나 길이 이상
    """
    r = np.asarray(returns, dtype=float)
    h = np.asarray(h_path, dtype=float)
    if r.shape != h.shape:
        raise LengthMismatch(f"수익률 길이({r.shape[0]})와 경로 길이({h.shape[0]})가 다릅니다")
    T = r.shape[0]
    if not 0 <= k_max < T:
        raise ValueError(f"k_max는 0 이상 {T} 미만이어야 합니다: {k_max}")

    result = {}
    for k in range(-k_max, k_max + 1):
        if k >= 0:
            result[k] = _correlation(r[: T - k], h[k:])
        else:
            result[k] = _correlation(r[-k:], h[: T + k])
    return result


@dataclass
class GofReport:
    """한 모형 적합의 적합도 보고서

    Attributes:
        kind: 모형 변형
        descriptive: 관측 수익률 기술통계
        plug_in: 사후 평균 모수
        model_moments: plug-in 모수에서의 닫힌 형태 적률
        expected_return: plug-in 모수에서의 E[r_t]
        mean_deviance: 평균 이탈도
        mspe: 평균 제곱 예측 오차
        empirical_leadlag: 사후 평균 경로로 계산한 표본 상관
        model_leadlag: plug-in 모수에서의 닫힌 형태 상관
    """
    kind: ModelKind
    descriptive: DescriptiveStats
    plug_in: ModelParams
    model_moments: MomentSet
    expected_return: float
    mean_deviance: float
    mspe: float
    empirical_leadlag: Dict[int, float] = field(default_factory=dict)
    model_leadlag: Dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.kind.value,
            "descriptive": self.descriptive.to_dict(),
            "plug_in": self.plug_in.to_dict(),
            "model_moments": self.model_moments.to_dict(),
            "expected_return": self.expected_return,
            "mean_deviance": self.mean_deviance,
            "mspe": self.mspe,
            "empirical_leadlag": {str(k): v for k, v in self.empirical_leadlag.items()},
            "model_leadlag": {str(k): v for k, v in self.model_leadlag.items()},
        }


def gof_report(
    chain: PosteriorChain,
    returns: Any,
    k_max: int = 10,
    lags: Iterable[int] = (0, -10),
    h_path: Optional[Any] = None,
) -> GofReport:
    """적합도 보고서 생성

    Args:
        chain: 사후 표본
        returns: 적합에 사용한 수익률
        k_max: 경험적 선행-후행 상관의 최대 시차
        lags: 닫힌 형태 상관을 보고할 시차
        h_path: 경험적 상관에 쓸 경로 (None이면 체인의 사후 평균 경로)
    """
    r = np.asarray(returns, dtype=float)
    plug_in = plug_in_params(chain)
    path = chain.posterior_mean_path() if h_path is None else np.asarray(h_path, dtype=float)

    lags = list(lags)
    profile = leadlag(plug_in, max([1, k_max] + [abs(k) for k in lags]))
    return GofReport(
        kind=chain.kind,
        descriptive=descriptive_stats(r),
        plug_in=plug_in,
        model_moments=moment_set(plug_in),
        expected_return=expected_return(plug_in),
        mean_deviance=mean_deviance(chain, r),
        mspe=mspe(chain, r),
        empirical_leadlag=empirical_leadlag(r, path, min(k_max, r.shape[0] - 1)),
        model_leadlag={k: profile.corr(k) for k in lags},
    )
