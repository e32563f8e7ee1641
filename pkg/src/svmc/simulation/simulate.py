"""
정확한 경로 시뮬레이션 모듈

h_t = alpha + phi (h_{t-1} - alpha) + sigma eta_t
r_t = mu + exp(h_t / 2) eps_t,  corr(eps_t, eta_t) = rho

각 경로는 마스터 시드에서 결정적으로 파생된 독립 부분 스트림을 사용하므로
결과는 스레드 수와 무관하게 동일합니다.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.signal import lfilter

from svmc.models.core import (
    CorrelationOutOfRange,
    ModelParams,
    SeriesPair,
    mean_term,
    stationary_variance,
    validate,
)
from svmc.utils.logging import get_logger

logger = get_logger()

MAX_SEED = 2 ** 64


class InitMode(str, Enum):
    """h_0 초기화 방법"""
    STATIONARY = "stationary"  # h_0 ~ N(alpha, sigma^2 / (1 - phi^2))
    FIXED = "fixed"  # 주어진 h_0 사용


@dataclass(frozen=True)
class SimConfig:
    """시뮬레이션 설정

    Attributes:
        n_paths: 경로 수
        horizon: 경로 길이 T
        seed: 64비트 부호 없는 마스터 시드
        init: h_0 초기화 방법
        h0: FIXED 초기화에서 사용할 h_0
    """
    n_paths: int = 1
    horizon: int = 1008
    seed: int = 20240401
    init: InitMode = InitMode.STATIONARY
    h0: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n_paths < 1:
            raise ValueError(f"n_paths는 1 이상이어야 합니다: {self.n_paths}")
        if self.horizon < 1:
            raise ValueError(f"horizon은 1 이상이어야 합니다: {self.horizon}")
        if not 0 <= self.seed < MAX_SEED:
            raise ValueError(f"seed는 64비트 부호 없는 정수여야 합니다: {self.seed}")
        if self.init is InitMode.FIXED and (self.h0 is None or not math.isfinite(self.h0)):
            raise ValueError("FIXED 초기화에는 유한한 h0가 필요합니다")


def substream(seed: int, *keys: int) -> np.random.Generator:
    """마스터 시드와 인덱스 키로부터 결정적인 독립 난수 스트림 생성"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def draw_correlated_pair(
    rho: float,
    source: np.random.Generator,
    size: Union[None, int, Tuple[int, ...]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """상관계수 rho인 표준 이변량 정규 (eps, eta) 생성

    eta ~ N(0, 1)을 먼저 뽑고 eps = rho eta + sqrt(1 - rho^2) z 로 만듭니다.

    Args:
        rho: (-1, 1) 범위의 상관계수
        source: 난수 생성기
        size: 출력 크기 (None이면 스칼라)

    Returns:
        (eps, eta)

    Raises:
        CorrelationOutOfRange: |rho| >= 1
    """
    if not -1.0 < rho < 1.0:
        raise CorrelationOutOfRange(f"rho는 (-1, 1) 범위여야 합니다: rho={rho}")
    eta = source.standard_normal(size)
    z = source.standard_normal(size)
    eps = rho * eta + math.sqrt(1.0 - rho ** 2) * z
    return eps, eta


def volatility_recursion(
    params: ModelParams, h0: np.ndarray, eta: np.ndarray, axis: int = -1
) -> np.ndarray:
    """AR(1) 점화식으로 h_1..h_T 계산 (eta의 마지막 축이 시간)"""
    h0 = np.asarray(h0, dtype=float)
    # lfilter 초기 상태는 phi * (h_0 - alpha)
    zi = np.expand_dims(params.phi * (h0 - params.alpha), axis=axis)
    deviations, _ = lfilter([1.0], [1.0, -params.phi], params.sigma * eta, axis=axis, zi=zi)
    return params.alpha + deviations


def draw_initial_state(
    params: ModelParams,
    source: np.random.Generator,
    size: Union[None, int, Tuple[int, ...]] = None,
) -> np.ndarray:
    """정상 분포 N(alpha, sigma^2/(1-phi^2))에서 h_0 추출"""
    return params.alpha + math.sqrt(stationary_variance(params)) * source.standard_normal(size)


def simulate_path(params: ModelParams, config: SimConfig, path_index: int = 0) -> SeriesPair:
    """단일 경로 시뮬레이션

    Args:
        params: 모수
        config: 시뮬레이션 설정
        path_index: 경로 번호 (부분 스트림 선택)

    Returns:
        길이 T의 수익률과 변동성 경로
    """
    validate(params)
    source = substream(config.seed, path_index)

    if config.init is InitMode.STATIONARY:
        h0 = float(draw_initial_state(params, source))
    else:
        h0 = float(config.h0)

    eps, eta = draw_correlated_pair(params.rho, source, size=config.horizon)
    h = volatility_recursion(params, np.float64(h0), eta)
    returns = mean_term(params) + np.exp(h / 2.0) * eps
    return SeriesPair(returns=returns, volatility=h, t0_state=h0)


def simulate_paths(params: ModelParams, config: SimConfig, threads: int = 1) -> List[SeriesPair]:
    """config.n_paths 개의 경로를 시뮬레이션 (경로 i는 부분 스트림 i 사용)

    Args:
        params: 모수
        config: 시뮬레이션 설정
        threads: 최대 스레드 수

    Returns:
        경로 번호 순서의 SeriesPair 목록
    """
    validate(params)
    logger.debug(
        f"경로 시뮬레이션: {config.n_paths}개 x {config.horizon} 시점 (스레드 {threads})"
    )
    indices = range(config.n_paths)
    if threads <= 1 or config.n_paths == 1:
        return [simulate_path(params, config, i) for i in indices]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda i: simulate_path(params, config, i), indices))
