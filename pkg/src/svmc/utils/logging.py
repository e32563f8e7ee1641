"""
로깅 시스템 구현 모듈
"""
import logging
import os
from datetime import datetime
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

# 로그 레벨 매핑
LOG_LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}

FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# 로그 출력용 콘솔 (표준 에러)
console = Console(stderr=True)

logger = logging.getLogger("svmc")


def log_file_path(log_file: str, log_dir: Optional[str] = None) -> str:
    """타임스탬프가 붙은 로그 파일 경로 생성

    예: run.log -> run_20240401-093000.log
    """
    timestamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    file_name, file_ext = os.path.splitext(os.path.basename(log_file) if log_dir else log_file)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        return os.path.join(log_dir, f"{file_name}_{timestamp}{file_ext}")
    return f"{file_name}_{timestamp}{file_ext}"


def configure_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    log_dir: Optional[str] = None,
) -> Optional[str]:
    """로깅 시스템 설정

    Args:
        level: 로그 레벨 (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: 로그 파일 이름 (설정 시 파일에도 기록)
        log_dir: 로그 파일 디렉토리 (log_file과 함께 사용)

    Returns:
        실제 로그 파일 경로 (파일 로그를 쓰지 않으면 None)
    """
    log_level = LOG_LEVELS.get(level.upper(), logging.INFO)
    logger.setLevel(log_level)
    logger.propagate = False

    # 재설정 시 중복 방지
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    console_handler = RichHandler(
        console=console,
        rich_tracebacks=True,
        show_time=True,
        show_path=False,
        markup=False,
    )
    console_handler.setLevel(log_level)
    logger.addHandler(console_handler)

    path = None
    if log_file:
        try:
            path = log_file_path(log_file, log_dir)
            file_handler = logging.FileHandler(path, mode="a", encoding="utf-8")
            file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
            file_handler.setLevel(log_level)
            logger.addHandler(file_handler)
        except OSError as e:
            # 파일 로그 실패는 실행을 멈추지 않음
            console.print(f"[bold red]로그 파일 생성 중 오류 발생: {e}, 파일: {log_file}[/]")
            path = None

    logger.debug("로깅 시스템이 설정되었습니다.")
    if path:
        logger.info(f"로그 파일 경로: {os.path.abspath(path)}")
    return path


def get_logger() -> logging.Logger:
    """svmc 로거 반환

    Returns:
        설정된 로거 인스턴스
    """
    return logger
