"""
CSV 파일에서 수익률을 추출하기 위한 Extractor 구현
"""
from typing import Any

import numpy as np

from svmc.extractors.base import EmptyInput, Extractor, NonPositivePrice
from svmc.models.core import SeriesPair
from svmc.utils.logging import get_logger

logger = get_logger()


class PriceCSVExtractor(Extractor):
    """date,price 형식의 가격 CSV에서 로그 수익률 r_t = log(P_t / P_{t-1}) 계산

    가격 T개에서 수익률 T-1개를 만듭니다. 거래일 사이의 공백은 무시합니다.
    """

    TYPE = "prices"

    def extract(self) -> SeriesPair:
        frame = self.read_frame()
        if len(frame) < 2:
            raise EmptyInput(f"가격 자료는 2행 이상이어야 합니다: {len(frame)}행")

        date_column = self.find_column(frame, ["date"])
        price_column = self.find_column(frame, ["price"])
        prices = self.parse_floats(frame, price_column)
        for i, price in enumerate(prices):
            if price <= 0.0:
                raise NonPositivePrice(row=i + 1, price=float(price))
        self.check_order(frame, date_column)

        returns = np.diff(np.log(prices))
        logger.debug(f"가격 {len(prices)}개에서 수익률 {len(returns)}개 계산: {self.file_path}")
        return SeriesPair(returns=returns)


class ReturnCSVExtractor(Extractor):
    """date,return 형식의 수익률 CSV

    시뮬레이터 출력(t,r[,h])도 그대로 읽으며, h 열이 있으면 변동성 경로로
    함께 반환합니다.
    """

    TYPE = "returns"

    def extract(self) -> SeriesPair:
        frame = self.read_frame()
        if len(frame) < 1:
            raise EmptyInput(f"수익률 자료가 없습니다: {self.file_path}")

        index_column = self.find_column(frame, ["date", "t"])
        value_column = self.find_column(frame, ["return", "r"])
        returns = self.parse_floats(frame, value_column)
        self.check_order(frame, index_column)

        volatility: Any = None
        if "h" in frame.columns:
            volatility = self.parse_floats(frame, "h")

        logger.debug(f"수익률 {len(returns)}개 읽음: {self.file_path}")
        return SeriesPair(returns=returns, volatility=volatility)
