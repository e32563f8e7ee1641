"""
MCMC 샘플러 모듈

잠재 로그 분산 경로 h_0..h_T 와 모수 Theta 에 대한 Metropolis-within-Gibbs
샘플러입니다.

- h 블록: 단일 지점 랜덤워크 제안. 이웃하지 않는 지점들은 조건부 독립이므로
  짝수 인덱스, 홀수 인덱스 순서로 한꺼번에 갱신합니다.
- 모수 블록: alpha, atanh(phi), log(sigma), atanh(rho) 각각의 랜덤워크.
  SVMrhomu 에서는 제안마다 평균 보정항 mu 를 다시 계산합니다.
- 번인 구간 안의 적응 구간 동안만 Robbins-Monro 방식으로 보폭을 조정하고
  이후에는 고정합니다.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from svmc.inference.priors import (
    InferenceError,
    Priors,
    PriorSupportViolation,
    from_unconstrained,
    to_unconstrained,
)
from svmc.models.core import (
    LengthMismatch,
    ModelError,
    ModelKind,
    ModelParams,
    mean_term,
    return_conditional,
    stationary_variance,
    validate,
)
from svmc.utils.logging import get_logger

logger = get_logger()

MIN_OBSERVATIONS = 10
TARGET_ACCEPTANCE = 0.44
PARAM_BLOCKS = ("alpha", "phi", "sigma", "rho")
INITIAL_STEPS = {"alpha": 0.1, "phi": 0.1, "sigma": 0.1, "rho": 0.1, "h": 0.5}

ProgressCallback = Callable[[int, int], None]


class NonFiniteLikelihood(InferenceError):
    """자료나 초기 상태에서 로그 우도가 유한하지 않음"""
    pass


class ChainConfigError(InferenceError):
    """체인 설정 오류"""
    pass


class InsufficientData(InferenceError):
    """관측 수가 부족함"""
    pass


@dataclass(frozen=True)
class ChainConfig:
    """체인 설정

    Attributes:
        total_iters: 전체 반복 수
        burn_in: 번인 반복 수
        thin: 솎아내기 간격
        seed: 64비트 부호 없는 시드
        adapt_iters: 보폭 적응 구간 (None이면 burn_in 전체)
    """
    total_iters: int = 180_000
    burn_in: int = 30_000
    thin: int = 50
    seed: int = 20240401
    adapt_iters: Optional[int] = None

    def __post_init__(self) -> None:
        if self.burn_in < 0:
            raise ChainConfigError(f"burn_in은 0 이상이어야 합니다: {self.burn_in}")
        if self.burn_in >= self.total_iters:
            raise ChainConfigError(
                f"burn_in({self.burn_in})은 total_iters({self.total_iters})보다 작아야 합니다"
            )
        if self.thin < 1:
            raise ChainConfigError(f"thin은 1 이상이어야 합니다: {self.thin}")
        if self.retained < 1:
            raise ChainConfigError("보존되는 표본이 없습니다 (thin이 너무 큼)")
        if not 0 <= self.seed < 2 ** 64:
            raise ChainConfigError(f"seed는 64비트 부호 없는 정수여야 합니다: {self.seed}")
        if self.adapt_iters is not None and not 0 <= self.adapt_iters <= self.burn_in:
            raise ChainConfigError(
                f"adapt_iters({self.adapt_iters})는 0 이상 burn_in({self.burn_in}) 이하여야 합니다"
            )

    @property
    def retained(self) -> int:
        """보존 표본 수 (total_iters - burn_in) // thin"""
        return (self.total_iters - self.burn_in) // self.thin

    @property
    def adaptation_window(self) -> int:
        return self.burn_in if self.adapt_iters is None else self.adapt_iters

    def is_retained(self, iteration: int) -> bool:
        """0부터 센 반복 번호가 보존 대상인지 여부"""
        return iteration >= self.burn_in and (iteration - self.burn_in + 1) % self.thin == 0

    def with_seed(self, seed: int) -> "ChainConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_iters": self.total_iters,
            "burn_in": self.burn_in,
            "thin": self.thin,
            "seed": self.seed,
            "adapt_iters": self.adapt_iters,
        }


@dataclass
class PosteriorChain:
    """번인 이후 솎아낸 사후 표본

    Attributes:
        kind: 모형 변형
        alpha, phi, sigma, rho: 모수 표본 (길이 n)
        mu: 각 표본의 우도에 쓰인 평균 항
        deviance: 각 표본의 -2 log f(r | Theta, H)
        iterations: 1부터 센 반복 번호
        h_draws: 잠재 경로 h_1..h_T 표본 (n x T, 다시 읽은 체인에서는 None)
        h0_draws: 초기 상태 h_0 표본
        acceptance_rates: 적응 구간 이후 블록별 채택률
        step_sizes: 적응이 끝난 블록별 보폭 (h 는 지점 평균)
        seed: 체인 시드
        config: 체인 설정
    """
    kind: ModelKind
    alpha: np.ndarray
    phi: np.ndarray
    sigma: np.ndarray
    rho: np.ndarray
    mu: np.ndarray
    deviance: np.ndarray
    iterations: np.ndarray
    h_draws: Optional[np.ndarray] = None
    h0_draws: Optional[np.ndarray] = None
    acceptance_rates: Dict[str, float] = field(default_factory=dict)
    step_sizes: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None
    config: Optional[ChainConfig] = None

    def __len__(self) -> int:
        return int(self.alpha.shape[0])

    @property
    def parameter_names(self) -> List[str]:
        """보고 대상 모수 (SVM0 는 rho 제외)"""
        names = ["alpha", "phi", "sigma"]
        if self.kind.allows_correlation:
            names.append("rho")
        return names

    def params_at(self, index: int) -> ModelParams:
        return ModelParams(
            alpha=float(self.alpha[index]),
            phi=float(self.phi[index]),
            sigma=float(self.sigma[index]),
            rho=float(self.rho[index]),
            kind=self.kind,
        )

    @property
    def theta_draws(self) -> List[ModelParams]:
        return [self.params_at(i) for i in range(len(self))]

    def to_frame(self) -> pd.DataFrame:
        """iteration, alpha, phi, sigma, rho, mu, deviance 열의 DataFrame"""
        return pd.DataFrame({
            "iteration": self.iterations,
            "alpha": self.alpha,
            "phi": self.phi,
            "sigma": self.sigma,
            "rho": self.rho,
            "mu": self.mu,
            "deviance": self.deviance,
        })

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, kind: ModelKind, **extra: Any) -> "PosteriorChain":
        """to_frame 결과에서 체인 복원 (잠재 경로 표본 없음)"""
        missing = [c for c in ("iteration", "alpha", "phi", "sigma", "rho", "mu", "deviance")
                   if c not in frame.columns]
        if missing:
            raise ValueError(f"체인 파일에 필요한 열이 없습니다: {', '.join(missing)}")
        return cls(
            kind=ModelKind.parse(kind),
            alpha=frame["alpha"].to_numpy(dtype=float),
            phi=frame["phi"].to_numpy(dtype=float),
            sigma=frame["sigma"].to_numpy(dtype=float),
            rho=frame["rho"].to_numpy(dtype=float),
            mu=frame["mu"].to_numpy(dtype=float),
            deviance=frame["deviance"].to_numpy(dtype=float),
            iterations=frame["iteration"].to_numpy(dtype=int),
            **extra,
        )

    def posterior_mean_path(self) -> np.ndarray:
        """잠재 경로의 사후 평균 h_1..h_T"""
        if self.h_draws is None:
            raise ValueError("잠재 경로 표본이 없는 체인입니다")
        return self.h_draws.mean(axis=0)

    def latent_summary(self) -> pd.DataFrame:
        """t, h_mean, h_sd 열의 DataFrame (h_sd 는 n-1 분모)"""
        if self.h_draws is None:
            raise ValueError("잠재 경로 표본이 없는 체인입니다")
        n, length = self.h_draws.shape
        h_sd = self.h_draws.std(axis=0, ddof=1) if n > 1 else np.zeros(length)
        return pd.DataFrame({
            "t": np.arange(1, length + 1),
            "h_mean": self.h_draws.mean(axis=0),
            "h_sd": h_sd,
        })


def _check_returns(returns: Any) -> np.ndarray:
    r = np.asarray(returns, dtype=float)
    if r.ndim != 1:
        raise LengthMismatch(f"수익률은 1차원이어야 합니다: shape={r.shape}")
    if not np.all(np.isfinite(r)):
        raise NonFiniteLikelihood("수익률에 유한하지 않은 값이 있습니다")
    return r


def _full_path(params: ModelParams, h: Any, r: np.ndarray, h0: Optional[float]) -> np.ndarray:
    """h_0..h_T 경로 구성"""
    h = np.asarray(h, dtype=float)
    T = r.shape[0]
    if h0 is None and h.shape == (T + 1,):
        full = h
    elif h0 is not None and h.shape == (T,):
        full = np.concatenate(([float(h0)], h))
    elif h0 is None and h.shape == (T,) and params.kind is ModelKind.CLASSICAL:
        # SVM0 의 수익률 밀도는 h_{t-1} 에 의존하지 않음
        full = np.concatenate(([params.alpha], h))
    else:
        raise LengthMismatch(
            f"잠재 경로 길이({h.shape[0] if h.ndim else 0})가 수익률 길이({T})와 맞지 않습니다"
            + ("" if h0 is not None else " (h0가 필요합니다)")
        )
    if not np.all(np.isfinite(full)):
        raise NonFiniteLikelihood("잠재 경로에 유한하지 않은 값이 있습니다")
    return full


def _transition_terms(params: ModelParams, h_full: np.ndarray) -> np.ndarray:
    """[log p(h_0), log p(h_1 | h_0), ..., log p(h_T | h_{T-1})]"""
    terms = np.empty_like(h_full)
    terms[0] = stats.norm.logpdf(h_full[0], params.alpha, math.sqrt(stationary_variance(params)))
    terms[1:] = stats.norm.logpdf(
        h_full[1:], params.alpha + params.phi * (h_full[:-1] - params.alpha), params.sigma
    )
    return terms


def _measurement_terms(params: ModelParams, mu: float, h_full: np.ndarray, r: np.ndarray) -> np.ndarray:
    """[0, log f(r_1 | h_1, h_0), ..., log f(r_T | h_T, h_{T-1})]"""
    mean, var = return_conditional(params, h_full[1:], h_full[:-1], mu=mu)
    terms = np.zeros_like(h_full)
    terms[1:] = stats.norm.logpdf(r, mean, np.sqrt(var))
    return terms


def measurement_log_likelihood(
    params: ModelParams, h: Any, returns: Any, h0: Optional[float] = None
) -> float:
    """수익률 측정 밀도만의 로그 우도 sum_t log f(r_t | h_t, h_{t-1})

    Args:
        params: 유효한 모수
        h: 길이 T (h0 별도 지정) 또는 T+1 (h[0] = h_0) 의 잠재 경로
        returns: 길이 T 의 수익률
        h0: 초기 상태 (SVM0 에서는 생략 가능)
    """
    validate(params)
    r = _check_returns(returns)
    h_full = _full_path(params, h, r, h0)
    return float(np.sum(_measurement_terms(params, mean_term(params), h_full, r)))


def log_likelihood(params: ModelParams, h: Any, returns: Any, h0: Optional[float] = None) -> float:
    """완전 자료 로그 우도

    h_0 의 정상 분포 밀도, 각 h_t 의 AR(1) 전이 밀도, 각 r_t 의 조건부
    정규 밀도의 합입니다.

    Args:
        params: 유효한 모수
        h: 길이 T (h0 별도 지정) 또는 T+1 (h[0] = h_0) 의 잠재 경로
        returns: 길이 T 의 수익률
        h0: 초기 상태

    Raises:
        LengthMismatch: 길이 불일치
        NonFiniteLikelihood: 유한하지 않은 입력
    """
    validate(params)
    r = _check_returns(returns)
    h_full = _full_path(params, h, r, h0)
    total = np.sum(_transition_terms(params, h_full)) + np.sum(
        _measurement_terms(params, mean_term(params), h_full, r)
    )
    return float(total)


class _ChainState:
    """현재 상태와 항별 로그 밀도"""

    def __init__(self, params: ModelParams, h_full: np.ndarray, r: np.ndarray) -> None:
        self.r = r
        self.set(params, h_full)

    def set(self, params: ModelParams, h_full: np.ndarray) -> None:
        self.params = params
        self.mu = mean_term(params)
        self.h = h_full
        self.trans = _transition_terms(params, h_full)
        self.meas = _measurement_terms(params, self.mu, h_full, self.r)

    def local_terms(self) -> np.ndarray:
        """지점 t 에 의존하는 항의 합 tot[t] + tot[t+1]"""
        tot = self.trans + self.meas
        return tot + np.append(tot[1:], 0.0)

    @property
    def data_log_density(self) -> float:
        return float(np.sum(self.trans) + np.sum(self.meas))


def _update_latent(
    state: _ChainState,
    log_steps: np.ndarray,
    source: np.random.Generator,
    accepted: np.ndarray,
) -> None:
    """짝수, 홀수 지점 순서로 h 단일 지점 랜덤워크 갱신"""
    size = state.h.shape[0]
    for parity in (0, 1):
        sites = np.arange(parity, size, 2)
        z = source.standard_normal(sites.shape[0])
        log_u = np.log(source.random(sites.shape[0]))

        proposal = state.h.copy()
        proposal[sites] += np.exp(log_steps[sites]) * z
        current_local = state.local_terms()[sites]
        candidate = _ChainState(state.params, proposal, state.r)
        log_ratio = candidate.local_terms()[sites] - current_local

        accept = np.isfinite(log_ratio) & (log_u < log_ratio)
        new_h = state.h.copy()
        new_h[sites[accept]] = proposal[sites[accept]]
        state.set(state.params, new_h)
        accepted[sites] = accept


def _propose_params(u: np.ndarray, kind: ModelKind) -> Optional[ModelParams]:
    try:
        return validate(from_unconstrained(u, kind))
    except (ModelError, OverflowError):
        # tanh 포화 등 수치적 경계
        return None


def _initial_state(r: np.ndarray, kind: ModelKind) -> Tuple[np.ndarray, np.ndarray]:
    """h_t = log(표본 분산), alpha = log(표본 분산), phi = 0.9, sigma = 0.3, rho = 0"""
    sample_var = float(np.var(r))
    if sample_var <= 0.0:
        raise NonFiniteLikelihood("수익률의 표본 분산이 0입니다")
    level = math.log(sample_var)
    params = ModelParams(alpha=level, phi=0.9, sigma=0.3, rho=0.0, kind=kind)
    return to_unconstrained(params), np.full(r.shape[0] + 1, level)


def sample_posterior(
    returns: Any,
    kind: ModelKind,
    priors: Optional[Priors] = None,
    config: Optional[ChainConfig] = None,
    progress: Optional[ProgressCallback] = None,
    store_latent: bool = True,
) -> PosteriorChain:
    """사후 표본 추출

    Args:
        returns: 길이 T >= 10 의 수익률
        kind: 모형 변형
        priors: 사전분포 (None이면 기본값)
        config: 체인 설정 (None이면 기본값)
        progress: (완료 반복 수, 전체 반복 수) 콜백
        store_latent: 잠재 경로 표본 저장 여부

    Returns:
        PosteriorChain

    Raises:
        InsufficientData: T < 10
        NonFiniteLikelihood: 자료 또는 초기 상태의 로그 우도가 유한하지 않음
        PriorSupportViolation: 초기 모수가 사전분포 지지집합 밖
    """
    kind = ModelKind.parse(kind)
    priors = priors or Priors()
    config = config or ChainConfig()
    r = _check_returns(returns)
    if r.shape[0] < MIN_OBSERVATIONS:
        raise InsufficientData(f"관측 수가 {MIN_OBSERVATIONS}개 이상이어야 합니다: {r.shape[0]}")

    source = np.random.default_rng(np.random.SeedSequence(config.seed))
    u, h_full = _initial_state(r, kind)
    state = _ChainState(from_unconstrained(u, kind), h_full, r)
    log_prior = priors.log_density_unconstrained(u, kind)
    if not math.isfinite(log_prior):
        raise PriorSupportViolation(f"초기 모수의 사전밀도가 0입니다: {state.params}")
    if not math.isfinite(state.data_log_density):
        raise NonFiniteLikelihood("초기 상태의 로그 우도가 유한하지 않습니다")

    blocks = [b for b in PARAM_BLOCKS if b != "rho" or kind.allows_correlation]
    block_index = {name: i for i, name in enumerate(PARAM_BLOCKS)}
    log_steps = {b: math.log(INITIAL_STEPS[b]) for b in blocks}
    h_log_steps = np.full(h_full.shape[0], math.log(INITIAL_STEPS["h"]))

    n = config.retained
    T = r.shape[0]
    draws = {name: np.empty(n) for name in ("alpha", "phi", "sigma", "rho", "mu", "deviance")}
    iterations = np.empty(n, dtype=int)
    h_draws = np.empty((n, T)) if store_latent else None
    h0_draws = np.empty(n)

    window = config.adaptation_window
    accept_counts = {b: 0 for b in blocks}
    h_accept_total = 0.0
    counted = 0
    h_accepted = np.zeros(h_full.shape[0], dtype=bool)
    report_every = max(1, config.total_iters // 10)
    stored = 0

    logger.info(
        f"{kind.label} 샘플링 시작: T={T}, 반복 {config.total_iters}, "
        f"번인 {config.burn_in}, 간격 {config.thin}, 시드 {config.seed}"
    )

    for i in range(config.total_iters):
        adapting = i < window
        gain = (i + 1) ** -0.6

        _update_latent(state, h_log_steps, source, h_accepted)
        if adapting:
            h_log_steps += gain * (h_accepted - TARGET_ACCEPTANCE)

        for name in blocks:
            z = source.standard_normal()
            log_u = math.log(source.random())
            proposal_u = u.copy()
            proposal_u[block_index[name]] += math.exp(log_steps[name]) * z

            accepted = False
            params = _propose_params(proposal_u, kind)
            if params is not None:
                proposal_prior = priors.log_density_unconstrained(proposal_u, kind)
                candidate = _ChainState(params, state.h, r)
                log_ratio = (
                    proposal_prior + candidate.data_log_density
                    - log_prior - state.data_log_density
                )
                if math.isfinite(log_ratio) and log_u < log_ratio:
                    u, log_prior, state = proposal_u, proposal_prior, candidate
                    accepted = True

            if adapting:
                log_steps[name] += gain * (float(accepted) - TARGET_ACCEPTANCE)
            else:
                accept_counts[name] += int(accepted)

        if not adapting:
            h_accept_total += float(np.mean(h_accepted))
            counted += 1

        if config.is_retained(i):
            p = state.params
            draws["alpha"][stored] = p.alpha
            draws["phi"][stored] = p.phi
            draws["sigma"][stored] = p.sigma
            draws["rho"][stored] = p.rho
            draws["mu"][stored] = state.mu
            draws["deviance"][stored] = -2.0 * float(np.sum(state.meas))
            iterations[stored] = i + 1
            h0_draws[stored] = state.h[0]
            if h_draws is not None:
                h_draws[stored] = state.h[1:]
            stored += 1

        if (i + 1) % report_every == 0:
            logger.info(
                f"반복 {i + 1}/{config.total_iters} ({100 * (i + 1) // config.total_iters}%)"
            )
        if progress:
            progress(i + 1, config.total_iters)

        if i + 1 == window and window > 0:
            logger.debug(
                "보폭 적응 완료: "
                + ", ".join(f"{b}={math.exp(s):.4g}" for b, s in log_steps.items())
                + f", h(평균)={float(np.mean(np.exp(h_log_steps))):.4g}"
            )

    rates = {b: accept_counts[b] / counted if counted else float("nan") for b in blocks}
    rates["h"] = h_accept_total / counted if counted else float("nan")
    steps = {b: math.exp(s) for b, s in log_steps.items()}
    steps["h"] = float(np.mean(np.exp(h_log_steps)))

    logger.info(
        "샘플링 완료, 채택률: " + ", ".join(f"{b}={v:.3f}" for b, v in rates.items())
    )
    return PosteriorChain(
        kind=kind,
        alpha=draws["alpha"],
        phi=draws["phi"],
        sigma=draws["sigma"],
        rho=draws["rho"],
        mu=draws["mu"],
        deviance=draws["deviance"],
        iterations=iterations,
        h_draws=h_draws,
        h0_draws=h0_draws,
        acceptance_rates=rates,
        step_sizes=steps,
        seed=config.seed,
        config=config,
    )


def chain_seeds(seed: int, n_chains: int) -> List[int]:
    """마스터 시드에서 체인별 시드 파생 (체인이 하나면 마스터 시드 그대로)"""
    if n_chains < 1:
        raise ChainConfigError(f"n_chains는 1 이상이어야 합니다: {n_chains}")
    if n_chains == 1:
        return [seed]
    children = np.random.SeedSequence(seed).spawn(n_chains)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def _run_chain(args: Tuple[np.ndarray, ModelKind, Priors, ChainConfig, bool]) -> PosteriorChain:
    returns, kind, priors, config, store_latent = args
    return sample_posterior(returns, kind, priors, config, store_latent=store_latent)


def sample_chains(
    returns: Any,
    kind: ModelKind,
    priors: Optional[Priors] = None,
    config: Optional[ChainConfig] = None,
    n_chains: int = 1,
    threads: int = 1,
    store_latent: bool = True,
) -> List[PosteriorChain]:
    """서로 다른 시드로 여러 체인을 실행

    체인들은 공유 상태가 없으므로 threads 개까지 프로세스 풀에서 병렬로
    실행합니다. 결과 순서는 시드 순서와 같습니다.
    """
    kind = ModelKind.parse(kind)
    priors = priors or Priors()
    config = config or ChainConfig()
    r = _check_returns(returns)
    jobs = [(r, kind, priors, config.with_seed(s), store_latent) for s in chain_seeds(config.seed, n_chains)]

    if threads <= 1 or n_chains == 1:
        return [_run_chain(job) for job in jobs]

    logger.info(f"{n_chains}개 체인을 최대 {threads}개 프로세스로 실행합니다")
    with ProcessPoolExecutor(max_workers=min(threads, n_chains)) as executor:
        return list(executor.map(_run_chain, jobs))
