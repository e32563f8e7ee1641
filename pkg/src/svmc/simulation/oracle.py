"""
몬테카를로 검증 오라클

정상 분포에서 직접 추출한 표본으로 평균, 중심 적률, 선행-후행 공분산을
추정하고, 닫힌 형태 값과 표준오차 단위로 비교합니다.

표본은 고정 크기 청크로 나뉘며 청크 i는 부분 스트림 (키, i)를 사용합니다.
청크 합계는 인덱스 순서로 합산하므로 결과는 스레드 수와 무관합니다.
"""
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from svmc.models.core import ModelKind, ModelParams, mean_term, stationary_variance, validate
from svmc.models.moments import (
    fourth_moment,
    leadlag,
    mean_correction,
    third_moment,
    variance,
)
from svmc.simulation.simulate import (
    draw_correlated_pair,
    draw_initial_state,
    substream,
    volatility_recursion,
)
from svmc.utils.logging import get_logger

logger = get_logger()

MIN_DRAWS = 10_000
DEFAULT_CHUNK_SIZE = 250_000

# 부분 스트림 키 (같은 시드에서도 추정량끼리 독립)
_MOMENTS_KEY = 0
_LEADLAG_KEY = 1


@dataclass(frozen=True)
class McEstimate:
    """몬테카를로 추정값

    Attributes:
        value: 추정값
        std_error: 표본 표준편차 / sqrt(n)
        n: 유효 표본 수
    """
    value: float
    std_error: float
    n: int

    @classmethod
    def from_sums(cls, total: float, total_sq: float, n: int) -> "McEstimate":
        """합계와 제곱합에서 추정값 생성"""
        mean = total / n
        sample_var = max(total_sq - n * mean ** 2, 0.0) / (n - 1)
        return cls(value=mean, std_error=math.sqrt(sample_var / n), n=n)

    def z_score(self, target: float) -> float:
        """(추정값 - 목표) / 표준오차"""
        diff = self.value - target
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "std_error": self.std_error, "n": self.n}


def _chunk_sizes(n: int, chunk_size: int) -> List[int]:
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _map_chunks(
    fn: Callable[[int, int], np.ndarray], sizes: Sequence[int], threads: int
) -> np.ndarray:
    """청크별 합계 배열을 인덱스 순서대로 합산"""
    if threads <= 1 or len(sizes) == 1:
        parts = [fn(i, size) for i, size in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(fn, range(len(sizes)), sizes))

    total = np.zeros_like(parts[0])
    for part in parts:
        total = total + part
    return total


def _stationary_returns(params: ModelParams, mu: float, source: np.random.Generator, size: int) -> np.ndarray:
    """정상 상태에서 독립 추출한 r = mu + exp(h/2) eps"""
    h_prev = draw_initial_state(params, source, size)
    eps, eta = draw_correlated_pair(params.rho, source, size=size)
    h = params.alpha + params.phi * (h_prev - params.alpha) + params.sigma * eta
    return mu + np.exp(h / 2.0) * eps


def mc_moments(
    params: ModelParams,
    n: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
) -> Dict[str, McEstimate]:
    """정상 분포 표본으로 평균과 2~4차 중심 적률 추정

    중심 적률은 표본 평균을 기준으로 계산합니다 (두 번째 패스에서 같은
    청크를 다시 생성).

    Args:
        params: 모수 (평균 항은 모형 변형을 따름)
        n: 표본 수 (>= 10^4)
        seed: 마스터 시드
        chunk_size: 청크 크기
        threads: 최대 스레드 수

    Returns:
        "mean", "variance", "mu3", "mu4" 키의 McEstimate
    """
    validate(params)
    if n < MIN_DRAWS:
        raise ValueError(f"n은 {MIN_DRAWS} 이상이어야 합니다: {n}")

    mu = mean_term(params)
    sizes = _chunk_sizes(n, chunk_size)

    def draws(index: int, size: int) -> np.ndarray:
        return _stationary_returns(params, mu, substream(seed, _MOMENTS_KEY, index), size)

    def first_pass(index: int, size: int) -> np.ndarray:
        r = draws(index, size)
        return np.array([r.sum(), np.square(r).sum()])

    s1, s2 = _map_chunks(first_pass, sizes, threads)
    mean = McEstimate.from_sums(s1, s2, n)

    def second_pass(index: int, size: int) -> np.ndarray:
        d = draws(index, size) - mean.value
        powers = [d ** 2, d ** 3, d ** 4]
        return np.array([[p.sum(), np.square(p).sum()] for p in powers])

    sums = _map_chunks(second_pass, sizes, threads)
    result = {"mean": mean}
    for name, (total, total_sq) in zip(("variance", "mu3", "mu4"), sums):
        result[name] = McEstimate.from_sums(total, total_sq, n)

    logger.debug(f"MC 적률 추정 완료: n={n}, {params}")
    return result


def mc_leadlag(
    params: ModelParams,
    k_max: int,
    n: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int = 1,
) -> List[McEstimate]:
    """경로 조각으로 cov(r_t, h_{t+k}) 추정 (k = -k_max..+k_max)

    각 조각은 정상 초기 상태에서 시작해 길이 2 k_max + 1로 시뮬레이션하고
    가운데 시점 t에서 r_t (h_{t+k} - alpha) 를 평균합니다.

    Returns:
        인덱스 j가 시차 j - k_max 에 대응하는 McEstimate 목록
    """
    validate(params)
    if k_max < 1:
        raise ValueError(f"k_max는 1 이상이어야 합니다: {k_max}")
    if n < MIN_DRAWS:
        raise ValueError(f"n은 {MIN_DRAWS} 이상이어야 합니다: {n}")

    mu = mean_term(params)
    length = 2 * k_max + 1
    center = k_max
    sizes = _chunk_sizes(n, chunk_size)

    def segment_sums(index: int, size: int) -> np.ndarray:
        source = substream(seed, _LEADLAG_KEY, index)
        h0 = draw_initial_state(params, source, size)
        eps, eta = draw_correlated_pair(params.rho, source, size=(size, length))
        h = volatility_recursion(params, h0, eta, axis=-1)
        r_center = mu + np.exp(h[:, center] / 2.0) * eps[:, center]
        products = r_center[:, None] * (h - params.alpha)
        return np.stack([products.sum(axis=0), np.square(products).sum(axis=0)])

    totals, totals_sq = _map_chunks(segment_sums, sizes, threads)
    return [McEstimate.from_sums(totals[j], totals_sq[j], n) for j in range(length)]


@dataclass(frozen=True)
class VerifySettings:
    """검증 설정

    Attributes:
        n: 점당 표본 수
        n_heavy: phi >= 0.95 인 점에서 mu_4 검사에 쓰는 표본 수
        k_max: 선행-후행 최대 시차
        tolerance_se: 허용 표준오차 배수
        chunk_size: 청크 크기
        seed: 마스터 시드
    """
    n: int = 1_000_000
    n_heavy: int = 10_000_000
    k_max: int = 3
    tolerance_se: float = 4.0
    chunk_size: int = DEFAULT_CHUNK_SIZE
    seed: int = 20240401


@dataclass(frozen=True)
class CheckRow:
    """닫힌 형태 대 몬테카를로 비교 한 줄"""
    point: int
    params: ModelParams
    quantity: str
    closed_form: float
    estimate: McEstimate
    z: float
    status: str  # pass | fail | inconclusive

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point,
            "alpha": self.params.alpha,
            "phi": self.params.phi,
            "sigma": self.params.sigma,
            "rho": self.params.rho,
            "quantity": self.quantity,
            "closed_form": self.closed_form,
            "mc_value": self.estimate.value,
            "std_error": self.estimate.std_error,
            "n": self.estimate.n,
            "z": self.z,
            "status": self.status,
        }


def default_grid() -> List[ModelParams]:
    """3 x 3 x 3 x 5 = 135 점 검증 격자"""
    alphas = (-8.0, -1.0, 0.0)
    phis = (0.0, 0.5, 0.95)
    sigmas = (0.1, 0.5, 1.0)
    rhos = (-0.8, -0.3, 0.0, 0.3, 0.8)
    return [
        ModelParams(alpha=a, phi=p, sigma=s, rho=r, kind=ModelKind.MEAN_CORRECTED)
        for a, p, s, r in itertools.product(alphas, phis, sigmas, rhos)
    ]


def is_conclusive(params: ModelParams, order: int, n: int) -> bool:
    """표준오차를 신뢰할 수 있는지 판단

    exp(h/2) 의 order 제곱을 평균하는 추정량의 상대 분산은 대략
    exp(order^2 v / 4) (v = sigma^2/(1-phi^2)) 이고, 이것이 n/1000 을 넘으면
    표본 표준오차가 과소 추정됩니다.
    """
    log_ratio = order ** 2 * stationary_variance(params) / 4.0
    return log_ratio < math.log(n / 1000.0)


def _point_seed(seed: int, point: int) -> int:
    state = np.random.SeedSequence(seed, spawn_key=(point,)).generate_state(1, dtype=np.uint64)
    return int(state[0])


def verify_point(
    params: ModelParams,
    settings: VerifySettings,
    point: int = 0,
    threads: int = 1,
) -> List[CheckRow]:
    """한 모수 점에서 모든 닫힌 형태 값을 오라클과 비교

    -mu 는 SVMrho 수익률의 평균으로, 중심 적률과 공분산은 모형 변형과
    무관하므로 같은 SVMrho 표본으로 추정합니다.
    """
    validate(params)
    oracle_params = params.with_values(kind=ModelKind.CORRELATED)
    seed = _point_seed(settings.seed, point)
    heavy = params.phi >= 0.95

    moments = mc_moments(oracle_params, settings.n, seed, settings.chunk_size, threads)
    if heavy and settings.n_heavy > settings.n:
        fourth = mc_moments(
            oracle_params, settings.n_heavy, seed + 1 if seed + 1 < 2 ** 64 else 0,
            settings.chunk_size, threads,
        )["mu4"]
    else:
        fourth = moments["mu4"]
    covariances = mc_leadlag(oracle_params, settings.k_max, settings.n, seed, settings.chunk_size, threads)
    profile = leadlag(params, settings.k_max)

    checks = [
        ("neg_mean_correction", -mean_correction(params), moments["mean"], 1),
        ("variance", variance(params), moments["variance"], 2),
        ("mu3", third_moment(params), moments["mu3"], 3),
        ("mu4", fourth_moment(params), fourth, 4),
        ("sigma_rh", profile.sigma_rh, covariances[settings.k_max], 1),
    ]
    for k in range(1, settings.k_max + 1):
        checks.append((f"lead_cov_{k}", profile.lead_cov(k), covariances[settings.k_max + k], 1))
        checks.append((f"lag_cov_{k}", profile.lag_cov(k), covariances[settings.k_max - k], 1))

    rows = []
    for quantity, closed, estimate, order in checks:
        z = estimate.z_score(closed)
        if not is_conclusive(params, order, estimate.n):
            status = "inconclusive"
        elif abs(z) <= settings.tolerance_se:
            status = "pass"
        else:
            status = "fail"
        rows.append(CheckRow(point, params, quantity, closed, estimate, z, status))
    return rows


@dataclass
class VerifyResult:
    """검증 결과 묶음"""
    rows: List[CheckRow] = field(default_factory=list)

    @property
    def counts(self) -> Dict[str, int]:
        counts = {"pass": 0, "fail": 0, "inconclusive": 0}
        for row in self.rows:
            counts[row.status] += 1
        return counts

    @property
    def passed(self) -> bool:
        return self.counts["fail"] == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "summary": {**self.counts, "total": len(self.rows), "passed": self.passed},
            "rows": [row.to_dict() for row in self.rows],
        }


def verify_grid(
    grid: Optional[Iterable[ModelParams]] = None,
    settings: Optional[VerifySettings] = None,
    threads: int = 1,
    progress: Optional[Callable[[int, int], None]] = None,
) -> VerifyResult:
    """격자 전체 검증

    Args:
        grid: 모수 점 목록 (None이면 135점 기본 격자)
        settings: 검증 설정
        threads: 최대 스레드 수
        progress: (완료 점 수, 전체 점 수) 콜백
    """
    points = list(grid) if grid is not None else default_grid()
    settings = settings or VerifySettings()
    result = VerifyResult()

    for index, params in enumerate(points):
        result.rows.extend(verify_point(params, settings, point=index, threads=threads))
        if progress:
            progress(index + 1, len(points))
        logger.debug(f"검증 점 {index + 1}/{len(points)} 완료: {params}")

    counts = result.counts
    logger.info(
        f"검증 완료: 통과 {counts['pass']}, 실패 {counts['fail']}, 판단 불가 {counts['inconclusive']}"
    )
    return result


def emh_check(params: ModelParams, n: int, seed: int, threads: int = 1) -> Dict[str, McEstimate]:
    """SVMrhomu 와 SVMrho 수익률의 표본 평균 비교

    Returns:
        "mean_corrected", "correlated" 키의 평균 추정값
    """
    return {
        "mean_corrected": mc_moments(
            params.with_values(kind=ModelKind.MEAN_CORRECTED), n, seed, threads=threads
        )["mean"],
        "correlated": mc_moments(
            params.with_values(kind=ModelKind.CORRELATED), n, seed, threads=threads
        )["mean"],
    }
