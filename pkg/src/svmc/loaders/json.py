"""
구조화된 결과를 JSON 파일로 저장하기 위한 Loader 구현
"""
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from svmc.loaders.base import Loader


def to_jsonable(value: Any) -> Any:
    """numpy/pandas 값을 JSON 직렬화 가능한 파이썬 값으로 변환

    유한하지 않은 실수는 None(null)이 됩니다.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, pd.DataFrame):
        return to_jsonable(value.to_dict(orient="records"))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


class JSONLoader(Loader):
    """dict를 JSON 파일로 저장하는 Loader (indent=2, 실수는 repr 정밀도)

    설정 매개변수:
        file_path: 저장할 파일 경로
        if_exists: "fail" 또는 "replace" (기본값: "replace")
    """

    TYPE = "json"

    def load(self, data: Dict[str, Any]) -> int:
        """
        Returns:
            저장된 최상위 항목 수
        """
        self._check_exists()
        payload = to_jsonable(data)
        with open(self.file_path, "w", encoding=self.config.get("encoding", "utf-8")) as f:
            json.dump(payload, f, indent=2, ensure_ascii=False, allow_nan=False)
            f.write("\n")
        return len(payload)


def read_json(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
