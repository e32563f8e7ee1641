"""
샘플 데이터 생성 유틸리티
"""
from typing import Optional

import numpy as np
import pandas as pd

from svmc.loaders.base import IfExists
from svmc.loaders.csv import CSVLoader
from svmc.models.core import ModelParams
from svmc.simulation.simulate import SimConfig, simulate_path


def generate_sample_prices(
    params: ModelParams,
    days: int = 1008,
    start_date: str = "2002-04-01",
    start_price: float = 1000.0,
    seed: int = 20240401,
) -> pd.DataFrame:
    """모형에서 시뮬레이션한 수익률로 영업일 가격 시계열 생성

    Args:
        params: 시뮬레이션 모수
        days: 수익률 개수 (가격은 days + 1 개)
        start_date: 첫 영업일 (ISO-8601)
        start_price: 첫 가격
        seed: 시드

    Returns:
        date, price 열의 DataFrame
    """
    pair = simulate_path(params, SimConfig(horizon=days, seed=seed))
    log_prices = np.log(start_price) + np.concatenate(([0.0], np.cumsum(pair.returns)))
    dates = pd.bdate_range(start=start_date, periods=days + 1)
    return pd.DataFrame({"date": dates.strftime("%Y-%m-%d"), "price": np.exp(log_prices)})


def generate_sample_csv(
    file_path: str,
    params: ModelParams,
    days: int = 1008,
    seed: Optional[int] = None,
    if_exists: str = IfExists.REPLACE.value,
) -> int:
    """샘플 가격 CSV 파일 생성 (date,price)

    Returns:
        저장된 행 수

    Raises:
        FileExistsError: 파일이 이미 존재하고 if_exists='fail'인 경우
    """
    frame = generate_sample_prices(params, days=days, seed=seed if seed is not None else 20240401)
    with CSVLoader({"file_path": file_path, "if_exists": if_exists}) as loader:
        return loader.load(frame)
