"""
DataFrame을 CSV 파일로 저장하기 위한 Loader 구현
"""
import pandas as pd

from svmc.loaders.base import Loader

# 왕복 변환 시 비트 단위로 같은 값을 복원하는 자릿수
ROUND_TRIP_FORMAT = "%.17g"


class CSVLoader(Loader):
    """DataFrame을 CSV 파일로 저장하는 Loader

    설정 매개변수:
        file_path: 저장할 파일 경로
        if_exists: "fail" 또는 "replace" (기본값: "replace")
        float_format: 부동 소수점 포맷 (기본값: "%.17g")
    """

    TYPE = "csv"

    def load(self, data: pd.DataFrame) -> int:
        """
        Returns:
            저장된 행 수

        Raises:
            FileExistsError: 파일이 이미 존재하고 if_exists='fail'인 경우
        """
        self._check_exists()
        data.to_csv(
            self.file_path,
            index=False,
            encoding=self.config.get("encoding", "utf-8"),
            float_format=self.config.get("float_format", ROUND_TRIP_FORMAT),
            lineterminator="\n",
        )
        return len(data)


def read_csv(path: str) -> pd.DataFrame:
    """CSVLoader 로 저장한 파일을 정확한 실수 값으로 다시 읽기"""
    return pd.read_csv(path, float_precision="round_trip")
