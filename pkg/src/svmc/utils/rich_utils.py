"""
Rich 라이브러리를 활용한 유틸리티 함수

콘솔 출력 관련 유틸리티 함수 모음
"""
import contextlib
from typing import Callable, Iterator

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeRemainingColumn,
)

console = Console()


@contextlib.contextmanager
def spinner(text: str) -> Iterator[None]:
    """스피너 표시 컨텍스트 매니저"""
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}"),
        transient=True,
        console=console,
    ) as progress:
        task_id = progress.add_task(text, total=None)
        try:
            yield
        finally:
            progress.remove_task(task_id)


@contextlib.contextmanager
def progress_bar(text: str, total: int) -> Iterator[Callable[[int, int], None]]:
    """진행률 막대 컨텍스트 매니저

    (완료 수, 전체 수)를 받는 콜백을 넘겨주며, 샘플러와 검증 격자의
    progress 인자로 그대로 사용할 수 있습니다.

    Args:
        text: 표시할 텍스트
        total: 전체 작업 수
    """
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeRemainingColumn(),
        transient=True,
        console=console,
    ) as progress:
        task_id = progress.add_task(text, total=total)

        def update(done: int, total_count: int) -> None:
            progress.update(task_id, completed=done, total=total_count)

        yield update
