"""
수익률 자료 추출을 위한 기본 인터페이스
"""
import math
import os
from abc import ABC, abstractmethod
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from svmc.models.core import SeriesPair


class IngestError(ValueError):
    """자료 읽기 오류의 기본 클래스"""
    pass


class ParseError(IngestError):
    """값을 해석할 수 없음 (행은 헤더를 제외하고 1부터 셈)"""

    def __init__(self, message: str, row: int = 0, column: str = "") -> None:
        self.row = row
        self.column = column
        location = f" (행 {row}, 열 '{column}')" if column else ""
        super().__init__(f"{message}{location}")


class NonPositivePrice(IngestError):
    """0 이하의 가격"""

    def __init__(self, row: int, price: float) -> None:
        self.row = row
        self.price = price
        super().__init__(f"가격은 양수여야 합니다: {price} (행 {row})")


class NonMonotoneDates(IngestError):
    """날짜(또는 시점)가 엄격하게 증가하지 않음"""
    pass


class EmptyInput(IngestError):
    """자료가 없거나 부족함"""
    pass


class Extractor(ABC):
    """CSV 등에서 수익률 시계열을 추출하기 위한 추상 기본 클래스

    설정 매개변수:
        file_path: 파일 경로
        encoding: 파일 인코딩 (기본값: "utf-8")
    """

    TYPE = ""

    def __init__(self, config: Dict[str, Any]) -> None:
        """
        Args:
            config: Extractor 설정
        """
        self.config = config
        self._validate_config()
        self._setup()

    def _validate_config(self) -> None:
        """설정 유효성 검사

        Raises:
            ValueError: file_path 누락
        """
        if "file_path" not in self.config:
            raise ValueError(f"{self.__class__.__name__} 필수 설정 누락: file_path")

    def _setup(self) -> None:
        """파일 경로 확인"""
        self.file_path = os.path.expanduser(str(self.config["file_path"]))
        if not os.path.exists(self.file_path):
            raise FileNotFoundError(f"파일을 찾을 수 없습니다: {self.file_path}")

    def read_frame(self) -> pd.DataFrame:
        """모든 열을 문자열로 읽은 DataFrame (열 이름은 소문자)"""
        try:
            frame = pd.read_csv(
                self.file_path,
                dtype=str,
                keep_default_na=False,
                skipinitialspace=True,
                encoding=self.config.get("encoding", "utf-8"),
            )
        except pd.errors.EmptyDataError:
            raise EmptyInput(f"빈 파일입니다: {self.file_path}")
        except pd.errors.ParserError as e:
            raise ParseError(f"CSV 형식 오류: {e}")
        frame.columns = [str(c).strip().lower() for c in frame.columns]
        return frame

    @staticmethod
    def find_column(frame: pd.DataFrame, candidates: List[str]) -> str:
        """후보 중 처음 존재하는 열 이름

        Raises:
            ParseError: 후보 열이 하나도 없는 경우
        """
        for name in candidates:
            if name in frame.columns:
                return name
        raise ParseError(
            f"필수 열이 없습니다: {' 또는 '.join(candidates)} (실제 열: {', '.join(frame.columns)})"
        )

    @staticmethod
    def parse_floats(frame: pd.DataFrame, column: str) -> np.ndarray:
        """열을 유한한 실수로 해석

        Raises:
            ParseError: 해석 불가 또는 유한하지 않은 값 (행, 열 보고)
        """
        values = np.empty(len(frame))
        for i, text in enumerate(frame[column].tolist()):
            try:
                value = float(text)
            except (TypeError, ValueError):
                raise ParseError(f"숫자가 아닌 값 '{text}'", row=i + 1, column=column)
            if not math.isfinite(value):
                raise ParseError(f"유한하지 않은 값 '{text}'", row=i + 1, column=column)
            values[i] = value
        return values

    @staticmethod
    def check_order(frame: pd.DataFrame, column: str) -> None:
        """날짜(ISO-8601) 또는 정수 시점 열이 엄격하게 증가하는지 검사

        Raises:
            ParseError: 날짜 해석 불가
            NonMonotoneDates: 증가하지 않는 행
        """
        texts = frame[column].tolist()
        if column == "t":
            keys = []
            for i, text in enumerate(texts):
                try:
                    keys.append(int(text))
                except ValueError:
                    raise ParseError(f"정수가 아닌 시점 '{text}'", row=i + 1, column=column)
        else:
            keys = []
            for i, text in enumerate(texts):
                try:
                    stamp = pd.to_datetime(text, format="ISO8601")
                except (ValueError, TypeError):
                    stamp = pd.NaT
                if pd.isna(stamp):
                    raise ParseError(f"ISO-8601 날짜가 아닌 값 '{text}'", row=i + 1, column=column)
                keys.append(stamp)

        for i in range(1, len(keys)):
            if not keys[i] > keys[i - 1]:
                raise NonMonotoneDates(
                    f"{column} 열이 엄격하게 증가하지 않습니다: '{texts[i - 1]}' -> '{texts[i]}' (행 {i + 1})"
                )

    @abstractmethod
    def extract(self) -> SeriesPair:
        """수익률 시계열 추출

        Returns:
            수익률만 (또는 변동성 경로 포함) 담은 SeriesPair
        """
        pass

    def close(self) -> None:
        pass

    def __enter__(self) -> "Extractor":
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        self.close()
