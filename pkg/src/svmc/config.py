"""
svmc 저장 위치 설정 모듈
"""
import os
from datetime import datetime
from pathlib import Path
from typing import Optional

# 싱글톤 설정 인스턴스
_config_instance = None


class SvmcConfig:
    """svmc 산출물 저장 위치

    Args:
        storage_path: 저장 경로 (기본값: SVMC_OUTPUT_PATH 환경 변수 또는 ~/.svmc)
    """

    def __init__(self, storage_path: Optional[str] = None) -> None:
        self.storage_path = storage_path or os.environ.get(
            "SVMC_OUTPUT_PATH", os.path.join(str(Path.home()), ".svmc")
        )
        self._create_directories()

    def _create_directories(self) -> None:
        for subdir in ("runs", "logs"):
            os.makedirs(os.path.join(self.storage_path, subdir), exist_ok=True)

    @property
    def runs_dir(self) -> str:
        """명령별 기본 출력 디렉토리의 상위 경로"""
        return os.path.join(self.storage_path, "runs")

    @property
    def logs_dir(self) -> str:
        return os.path.join(self.storage_path, "logs")

    def run_dir(self, command: str) -> str:
        """--out 이 없을 때 쓰는 출력 디렉토리: runs/<command>-<타임스탬프>"""
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
        return os.path.join(self.runs_dir, f"{command}-{stamp}")


def get_config(storage_path: Optional[str] = None) -> SvmcConfig:
    """전역 svmc 설정 인스턴스 반환"""
    global _config_instance
    if _config_instance is None:
        _config_instance = SvmcConfig(storage_path)
    return _config_instance
