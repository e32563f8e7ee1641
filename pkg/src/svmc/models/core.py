"""
확률적 변동성 모형 핵심 정의 모듈

세 가지 모형 변형(SVM0, SVMrho, SVMrhomu), 모수 검증, 그리고 시뮬레이터와
샘플러가 공통으로 사용하는 조건부 분포를 정의합니다.
"""
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike


class ModelError(ValueError):
    """모형 정의 관련 오류"""
    pass


class StationarityViolation(ModelError):
    """정상성 조건(|phi| < 1) 위반"""
    pass


class NonPositiveSigma(ModelError):
    """변동성의 변동성(sigma)이 양수가 아님"""
    pass


class CorrelationOutOfRange(ModelError):
    """오차 상관계수가 (-1, 1) 범위를 벗어남"""
    pass


class KindConstraintViolation(ModelError):
    """모형 변형의 제약 위반 (예: SVM0에서 rho != 0)"""
    pass


class LengthMismatch(ModelError):
    """수익률과 변동성 경로의 길이 불일치"""
    pass


class NonFiniteSeries(ModelError):
    """시계열에 유한하지 않은 값이 포함됨"""
    pass


class ModelKind(str, Enum):
    """모형 변형"""
    CLASSICAL = "svm0"  # 무상관 오차
    CORRELATED = "svmrho"  # 상관 오차, mu = 0
    MEAN_CORRECTED = "svmrhomu"  # 상관 오차 + 평균 보정 mu

    @property
    def allows_correlation(self) -> bool:
        return self is not ModelKind.CLASSICAL

    @property
    def label(self) -> str:
        """보고서 열 이름"""
        return {
            ModelKind.CLASSICAL: "SVM0",
            ModelKind.CORRELATED: "SVMrho",
            ModelKind.MEAN_CORRECTED: "SVMrhomu",
        }[self]

    @classmethod
    def parse(cls, value: Union[str, "ModelKind"]) -> "ModelKind":
        """문자열 또는 별칭에서 모형 변형 해석

        Args:
            value: "svm0", "svmrho", "svmrhomu" 또는 "classical", "correlated",
                "mean_corrected" (대소문자 무시)

        Raises:
            ValueError: 알 수 없는 모형 이름
        """
        if isinstance(value, ModelKind):
            return value
        aliases = {
            "classical": cls.CLASSICAL,
            "correlated": cls.CORRELATED,
            "mean_corrected": cls.MEAN_CORRECTED,
            "meancorrected": cls.MEAN_CORRECTED,
        }
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(kind.value for kind in cls)
            raise ValueError(f"알 수 없는 모형 변형: {value}. 사용 가능한 값: {valid}")


@dataclass(frozen=True)
class ModelParams:
    """모수 벡터 Theta = (alpha, phi, sigma, rho)와 모형 변형

    Attributes:
        alpha: 장기 로그 분산 수준 (E[h_t])
        phi: AR(1) 지속성
        sigma: 변동성의 변동성
        rho: 수익률 오차와 변동성 오차의 상관계수
        kind: 모형 변형
    """
    alpha: float
    phi: float
    sigma: float
    rho: float = 0.0
    kind: ModelKind = ModelKind.MEAN_CORRECTED

    def with_values(self, **changes: Any) -> "ModelParams":
        """일부 값을 바꾼 새 모수 반환"""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["kind"] = self.kind.value
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelParams":
        return cls(
            alpha=float(data["alpha"]),
            phi=float(data["phi"]),
            sigma=float(data["sigma"]),
            rho=float(data.get("rho", 0.0)),
            kind=ModelKind.parse(data.get("kind", ModelKind.MEAN_CORRECTED)),
        )


@dataclass
class SeriesPair:
    """정렬된 수익률 r_1..r_T 와 잠재 로그 분산 경로 h_1..h_T

    Attributes:
        returns: 로그 수익률
        volatility: 잠재 로그 분산 경로 (관측 자료에서는 None)
        t0_state: 초기 상태 h_0
    """
    returns: np.ndarray
    volatility: Optional[np.ndarray] = None
    t0_state: float = 0.0

    def __post_init__(self) -> None:
        self.returns = np.asarray(self.returns, dtype=float)
        if not np.all(np.isfinite(self.returns)):
            raise NonFiniteSeries("수익률에 유한하지 않은 값이 있습니다")

        if self.volatility is not None:
            self.volatility = np.asarray(self.volatility, dtype=float)
            if self.volatility.shape != self.returns.shape:
                raise LengthMismatch(
                    f"변동성 길이({self.volatility.shape[0]})가 "
                    f"수익률 길이({self.returns.shape[0]})와 다릅니다"
                )
            if not np.all(np.isfinite(self.volatility)):
                raise NonFiniteSeries("변동성 경로에 유한하지 않은 값이 있습니다")

        if not math.isfinite(self.t0_state):
            raise NonFiniteSeries(f"h0가 유한하지 않습니다: {self.t0_state}")

    def __len__(self) -> int:
        return int(self.returns.shape[0])

    def to_frame(self) -> pd.DataFrame:
        """t, r, h 열을 가진 DataFrame으로 변환 (h는 있을 때만)"""
        frame = pd.DataFrame({"t": np.arange(1, len(self) + 1), "r": self.returns})
        if self.volatility is not None:
            frame["h"] = self.volatility
        return frame


def validate(params: ModelParams) -> ModelParams:
    """모수 유효성 검사

    Args:
        params: 검사할 모수

    Returns:
        유효하면 입력 그대로

    Raises:
        ModelError: 유한하지 않은 값
        StationarityViolation: |phi| >= 1
        NonPositiveSigma: sigma <= 0
        CorrelationOutOfRange: |rho| >= 1
        KindConstraintViolation: 모형 변형 제약 위반
    """
    for name in ("alpha", "phi", "sigma", "rho"):
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ModelError(f"{name} 값이 유한한 실수가 아닙니다: {value}")

    # 모든 닫힌 해가 1/(1 - phi^2)을 포함하므로 경계는 제외
    if abs(params.phi) >= 1.0:
        raise StationarityViolation(f"|phi| < 1 이어야 합니다: phi={params.phi}")
    if params.sigma <= 0.0:
        raise NonPositiveSigma(f"sigma > 0 이어야 합니다: sigma={params.sigma}")
    if abs(params.rho) >= 1.0:
        raise CorrelationOutOfRange(f"rho는 (-1, 1) 범위여야 합니다: rho={params.rho}")
    if params.kind is ModelKind.CLASSICAL and params.rho != 0.0:
        raise KindConstraintViolation(f"SVM0 모형은 rho = 0 이어야 합니다: rho={params.rho}")

    return params


def stationary_variance(params: ModelParams) -> float:
    """h_t 정상 분포의 분산 sigma^2 / (1 - phi^2)"""
    return params.sigma ** 2 / (1.0 - params.phi ** 2)


def mean_term(params: ModelParams) -> float:
    """모형 변형이 사용하는 평균 항 mu

    SVMrhomu에서는 평균 보정식으로 계산하고, 나머지 변형은 0입니다.
    """
    if params.kind is ModelKind.MEAN_CORRECTED:
        from svmc.models.moments import mean_correction
        return mean_correction(params)
    return 0.0


def _as_output(value: np.ndarray) -> Union[float, np.ndarray]:
    return float(value) if np.ndim(value) == 0 else value


def return_conditional(
    params: ModelParams,
    h_t: ArrayLike,
    h_prev: ArrayLike,
    mu: Optional[float] = None,
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """r_t | (h_t, h_{t-1}) 의 조건부 평균과 분산

    SVM0: N(0, e^{h_t})
    SVMrho / SVMrhomu: N(mu + rho e^{h_t/2} (h_t - alpha - phi (h_{t-1} - alpha)) / sigma,
                         e^{h_t} (1 - rho^2))

    Args:
        params: 유효한 모수
        h_t: 현재 로그 분산 (스칼라 또는 배열)
        h_prev: 직전 로그 분산
        mu: 미리 계산한 평균 항 (None이면 모형 변형에 따라 계산)

    Returns:
        (조건부 평균, 조건부 분산)
    """
    h_t = np.asarray(h_t, dtype=float)
    h_prev = np.asarray(h_prev, dtype=float)

    variance = np.exp(h_t) * (1.0 - params.rho ** 2)
    if params.kind is ModelKind.CLASSICAL:
        mean = np.zeros(np.broadcast(h_t, h_prev).shape)
    else:
        if mu is None:
            mu = mean_term(params)
        innovation = (h_t - params.alpha - params.phi * (h_prev - params.alpha)) / params.sigma
        mean = mu + params.rho * np.exp(h_t / 2.0) * innovation

    return _as_output(mean), _as_output(variance)


def volatility_conditional(
    params: ModelParams, h_prev: ArrayLike
) -> Tuple[Union[float, np.ndarray], float]:
    """h_t | h_{t-1} 의 조건부 평균과 분산: (alpha + phi (h_{t-1} - alpha), sigma^2)"""
    h_prev = np.asarray(h_prev, dtype=float)
    mean = params.alpha + params.phi * (h_prev - params.alpha)
    return _as_output(mean), params.sigma ** 2
