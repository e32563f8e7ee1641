"""
사후 표본 요약 모듈
"""
import math
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from svmc.inference.priors import InferenceError, Priors
from svmc.inference.sampler import PosteriorChain
from svmc.models.core import ModelParams


class EmptyChain(InferenceError):
    """보존된 표본이 없는 체인"""
    pass


def _require_draws(chain: PosteriorChain) -> None:
    if len(chain) == 0:
        raise EmptyChain("보존된 표본이 없는 체인입니다")


def posterior_summary(chain: PosteriorChain) -> pd.DataFrame:
    """모수별 사후 평균과 표준편차 (n-1 분모)

    SVM0 는 alpha, phi, sigma 3행, 나머지 변형은 rho 를 포함한 4행입니다.
    표본이 하나뿐이면 표준편차는 NaN 입니다.

    Raises:
        EmptyChain: 표본이 없는 경우
    """
    _require_draws(chain)
    rows = []
    for name in chain.parameter_names:
        values = getattr(chain, name)
        sd = float(np.std(values, ddof=1)) if len(values) > 1 else float("nan")
        rows.append({"parameter": name, "mean": float(np.mean(values)), "sd": sd})
    return pd.DataFrame(rows, columns=["parameter", "mean", "sd"])


def plug_in_params(chain: PosteriorChain) -> ModelParams:
    """사후 평균을 대입한 모수 추정값"""
    _require_draws(chain)
    return ModelParams(
        alpha=float(np.mean(chain.alpha)),
        phi=float(np.mean(chain.phi)),
        sigma=float(np.mean(chain.sigma)),
        rho=float(np.mean(chain.rho)) if chain.kind.allows_correlation else 0.0,
        kind=chain.kind,
    )


def gelman_rubin(chains: Sequence[PosteriorChain]) -> Dict[str, float]:
    """분할 R-hat

    각 체인을 앞뒤 절반으로 나누어 2m 개의 부분 체인으로 계산합니다.

    Raises:
        EmptyChain: 부분 체인 길이가 2 미만인 경우
        ValueError: 체인들의 모형 변형이나 길이가 다른 경우
    """
    if not chains:
        raise EmptyChain("체인이 없습니다")
    kinds = {c.kind for c in chains}
    lengths = {len(c) for c in chains}
    if len(kinds) != 1 or len(lengths) != 1:
        raise ValueError("모형 변형과 표본 수가 같은 체인들만 비교할 수 있습니다")
    half = lengths.pop() // 2
    if half < 2:
        raise EmptyChain("R-hat 계산에는 체인당 4개 이상의 표본이 필요합니다")

    result = {}
    for name in chains[0].parameter_names:
        parts = []
        for chain in chains:
            values = getattr(chain, name)
            parts.extend([values[:half], values[-half:]])
        split = np.vstack(parts)
        within = float(np.mean(np.var(split, axis=1, ddof=1)))
        between = half * float(np.var(np.mean(split, axis=1), ddof=1))
        if within == 0.0:
            result[name] = float("nan")
            continue
        pooled = (half - 1) / half * within + between / half
        result[name] = math.sqrt(pooled / within)
    return result


def summary_dict(
    chain: PosteriorChain,
    priors: Priors,
    extra_chains: Sequence[PosteriorChain] = (),
) -> Dict[str, Any]:
    """summary.json 내용 구성

    Args:
        chain: 기준 체인 (첫 번째 체인)
        priors: 사용한 사전분포
        extra_chains: 추가 체인 (있으면 R-hat 포함)
    """
    table = posterior_summary(chain)
    result: Dict[str, Any] = {
        "model": chain.kind.value,
        "draws": len(chain),
        "posterior": {
            row.parameter: {"mean": row.mean, "sd": row.sd}
            for row in table.itertuples(index=False)
        },
        "mu": {"mean": float(np.mean(chain.mu))},
        "mean_deviance": float(np.mean(chain.deviance)),
        "acceptance_rates": dict(chain.acceptance_rates),
        "step_sizes": dict(chain.step_sizes),
        "seed": chain.seed,
        "chain": chain.config.to_dict() if chain.config else None,
        "priors": priors.to_dict(),
    }
    if extra_chains:
        chains: List[PosteriorChain] = [chain, *extra_chains]
        result["chains"] = [
            {"seed": c.seed, "posterior": posterior_summary(c).to_dict(orient="records")}
            for c in chains
        ]
        result["r_hat"] = gelman_rubin(chains)
    return result
