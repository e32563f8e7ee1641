"""
명령 실행 컨텍스트와 매니페스트 모듈
"""
import hashlib
import os
import time
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from svmc import __version__
from svmc.loaders.json import JSONLoader

MANIFEST_NAME = "manifest.json"

# gof / report 가 읽는 fit 산출물
FIT_ARTIFACTS = ("chain.csv", "summary.json", "latent.csv")


class ExecutionStatus(Enum):
    """명령 실행 상태"""
    PENDING = "pending"
    RUNNING = "running"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


@dataclass
class MetricsTracker:
    """실행 지표 추적"""
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    draws_retained: int = 0
    paths_simulated: int = 0
    checks_run: int = 0
    checks_failed: int = 0
    error_count: int = 0

    def start(self) -> None:
        """측정 시작"""
        self.start_time = time.time()

    def stop(self) -> None:
        """측정 종료"""
        self.end_time = time.time()

    def get_execution_time(self) -> Optional[float]:
        """실행 시간(초) 계산

        Returns:
            실행 시간(초) 또는 None (측정 미완료 시)
        """
        if self.start_time is None or self.end_time is None:
            return None
        return self.end_time - self.start_time

    def to_dict(self) -> Dict[str, Any]:
        return {
            "execution_time_seconds": self.get_execution_time(),
            "draws_retained": self.draws_retained,
            "paths_simulated": self.paths_simulated,
            "checks_run": self.checks_run,
            "checks_failed": self.checks_failed,
            "error_count": self.error_count,
        }


@dataclass
class RunContext:
    """명령 실행 컨텍스트"""
    command: str
    run_id: str = field(default_factory=lambda: datetime.now().strftime("%Y%m%d-%H%M%S"))
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    input_path: Optional[str] = None
    fit_dirs: List[str] = field(default_factory=list)
    status: ExecutionStatus = ExecutionStatus.PENDING
    start_time: Optional[datetime] = None
    end_time: Optional[datetime] = None
    metrics: MetricsTracker = field(default_factory=MetricsTracker)
    artifacts: Dict[str, str] = field(default_factory=dict)
    logs: List[Dict[str, Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def start(self) -> None:
        """실행 시작"""
        self.start_time = datetime.now()
        self.status = ExecutionStatus.RUNNING
        self.metrics.start()

    def complete(self) -> None:
        """실행 성공"""
        self.end_time = datetime.now()
        self.status = ExecutionStatus.SUCCEEDED
        self.metrics.stop()

    def fail(self, error: Optional[Exception] = None) -> None:
        """실행 실패 처리

        Args:
            error: 발생한 예외 객체
        """
        self.end_time = datetime.now()
        self.status = ExecutionStatus.FAILED
        self.metrics.stop()
        if error:
            self.metadata["error"] = f"{type(error).__name__}: {error}"
            self.metrics.error_count += 1

    def add_artifact(self, name: str, path: str) -> None:
        self.artifacts[name] = path

    def log_event(self, event_type: str, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        """이벤트 기록

        Args:
            event_type: 이벤트 유형
            message: 이벤트 메시지
            details: 추가 세부 정보
        """
        entry: Dict[str, Any] = {
            "timestamp": datetime.now().isoformat(),
            "type": event_type,
            "message": message,
        }
        if details:
            entry["details"] = details
        self.logs.append(entry)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "run_id": self.run_id,
            "status": self.status.value,
            "start_time": self.start_time.isoformat() if self.start_time else None,
            "end_time": self.end_time.isoformat() if self.end_time else None,
            "fit_dirs": list(self.fit_dirs),
            "metrics": self.metrics.to_dict(),
            "artifacts": dict(self.artifacts),
            "metadata": self.metadata,
        }


def file_digest(path: str) -> str:
    """파일의 SHA-256 16진수 요약값"""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def fit_digests(fit_dir: str) -> Dict[str, Any]:
    """fit 디렉토리 경로와 산출물별 SHA-256 (없는 파일은 None)"""
    files = {}
    for name in FIT_ARTIFACTS:
        path = os.path.join(fit_dir, name)
        files[name] = file_digest(path) if os.path.isfile(path) else None
    return {"path": fit_dir, "sha256": files}


@dataclass
class RunManifest:
    """출력 디렉토리마다 하나씩 기록되는 실행 매니페스트

    매니페스트의 명령, 설정, 시드, 입력 요약값만으로 산출물을 다시 만들 수
    있어야 합니다.
    """
    command: str
    config: Dict[str, Any]
    seed: Optional[int]
    input_path: Optional[str]
    input_digest: Optional[str]
    version: str
    start_time: Optional[str]
    end_time: Optional[str]
    status: str
    fits: List[Dict[str, Any]] = field(default_factory=list)
    artifacts: Dict[str, str] = field(default_factory=dict)
    metrics: Dict[str, Any] = field(default_factory=dict)
    events: List[Dict[str, Any]] = field(default_factory=list)
    error: Optional[str] = None

    @classmethod
    def from_context(cls, context: RunContext) -> "RunManifest":
        digest = None
        if context.input_path and os.path.isfile(context.input_path):
            digest = file_digest(context.input_path)
        return cls(
            command=context.command,
            config=context.config,
            seed=context.seed,
            input_path=context.input_path,
            input_digest=digest,
            version=__version__,
            fits=[fit_digests(fit_dir) for fit_dir in context.fit_dirs],
            start_time=context.start_time.isoformat() if context.start_time else None,
            end_time=context.end_time.isoformat() if context.end_time else None,
            status=context.status.value,
            artifacts=dict(context.artifacts),
            metrics=context.metrics.to_dict(),
            events=list(context.logs),
            error=context.metadata.get("error"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "version": self.version,
            "status": self.status,
            "seed": self.seed,
            "input": {"path": self.input_path, "sha256": self.input_digest},
            "fits": self.fits,
            "start_time": self.start_time,
            "end_time": self.end_time,
            "config": self.config,
            "artifacts": self.artifacts,
            "metrics": self.metrics,
            "events": self.events,
            "error": self.error,
        }

    def write(self, out_dir: str) -> str:
        """out_dir/manifest.json 에 기록 (기존 매니페스트는 덮어씀)"""
        path = os.path.join(out_dir, MANIFEST_NAME)
        JSONLoader({"file_path": path, "if_exists": "replace"}).load(self.to_dict())
        return path
