"""
결과 저장을 위한 기본 인터페이스
"""
import os
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict


class IfExists(str, Enum):
    """기존 파일이 있을 때 처리 방법"""
    FAIL = "fail"  # 이미 존재하면 오류 발생
    REPLACE = "replace"  # 덮어쓰기


class Loader(ABC):
    """결과를 파일로 저장하기 위한 추상 기본 클래스

    설정 매개변수:
        file_path: 저장할 파일 경로
        if_exists: 파일이 이미 있을 때 처리 방법 (기본값: "replace")
        encoding: 파일 인코딩 (기본값: "utf-8")
    """

    TYPE = ""

    def __init__(self, config: Dict[str, Any]) -> None:
        """
        Args:
            config: Loader 설정
        """
        self.config = config
        self._validate_config()
        self._setup()

    def _validate_config(self) -> None:
        """설정 유효성 검사

        Raises:
            ValueError: 필수 설정이 누락되었거나 잘못된 경우
        """
        if "file_path" not in self.config:
            raise ValueError(f"{self.__class__.__name__} 필수 설정 누락: file_path")
        valid = [item.value for item in IfExists]
        if self.config.get("if_exists", IfExists.REPLACE.value) not in valid:
            raise ValueError(f"잘못된 if_exists 값: {self.config['if_exists']}. 유효한 값: {valid}")

    def _setup(self) -> None:
        """상위 디렉토리 생성"""
        self.file_path = os.path.expanduser(str(self.config["file_path"]))
        directory = os.path.dirname(os.path.abspath(self.file_path))
        os.makedirs(directory, exist_ok=True)

    def _check_exists(self) -> None:
        """
        Raises:
            FileExistsError: 파일이 이미 존재하고 if_exists='fail'인 경우
        """
        if_exists = self.config.get("if_exists", IfExists.REPLACE.value)
        if os.path.exists(self.file_path) and if_exists == IfExists.FAIL.value:
            raise FileExistsError(f"파일이 이미 존재합니다: {self.file_path}")

    @abstractmethod
    def load(self, data: Any) -> int:
        """데이터 저장 실행

        Args:
            data: 저장할 데이터

        Returns:
            저장된 행(또는 최상위 항목) 수
        """
        pass

    def close(self) -> None:
        pass

    def __enter__(self) -> "Loader":
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        self.close()
