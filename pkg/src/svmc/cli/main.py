"""
svmc 명령줄 인터페이스
"""
import functools
import os
import sys
import traceback
from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple

import click
import yaml
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from svmc import __version__
from svmc.config import get_config
from svmc.core.config import RunConfig, apply_overrides, generate_default_config, load_config
from svmc.core.pipeline import INGEST_MODES, Pipeline
from svmc.core.plugin import PluginRegistry, discover_plugins
from svmc.inference.summary import posterior_summary
from svmc.models.core import ModelKind, ModelParams, validate as validate_params
from svmc.utils.logging import configure_logging, get_logger
from svmc.utils.rich_utils import progress_bar, spinner
from svmc.utils.samples import generate_sample_csv

console = Console()
logger = get_logger()

MODEL_CHOICES = [kind.value for kind in ModelKind]
LOG_LEVEL_CHOICES = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _compose(*decorators: Callable) -> Callable:
    def apply(func: Callable) -> Callable:
        for decorator in reversed(decorators):
            func = decorator(func)
        return func
    return apply


common_options = _compose(
    click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="YAML 설정 파일"),
    click.option("--out", "out_dir", type=click.Path(file_okay=False), help="산출물 디렉토리"),
    click.option("--threads", type=click.IntRange(min=1), help="최대 스레드(프로세스) 수"),
    click.option("--log-level", type=click.Choice(LOG_LEVEL_CHOICES, case_sensitive=False), help="로그 레벨"),
    click.option("--log-file", type=str, help="로그 파일 이름"),
    click.option("--verbose", "-v", is_flag=True, help="상세 로그 출력"),
)

model_options = _compose(
    click.option("--model", type=click.Choice(MODEL_CHOICES, case_sensitive=False), help="모형 변형"),
    click.option("--alpha", type=float, help="alpha"),
    click.option("--phi", type=float, help="phi"),
    click.option("--sigma", type=float, help="sigma"),
    click.option("--rho", type=float, help="rho"),
)

mode_option = click.option(
    "--mode", type=click.Choice(INGEST_MODES), default="prices", show_default=True, help="입력 CSV 형식"
)


def _prepare(command: str, options: dict) -> Tuple[RunConfig, str]:
    """설정 로드, 옵션 반영, 로깅 설정, 출력 디렉토리 결정"""
    config_file = options.pop("config_file", None)
    out_dir = options.pop("out_dir", None)
    verbose = options.pop("verbose", False)
    config = load_config(config_file) if config_file else RunConfig()
    config = apply_overrides(config, **options)

    level = "DEBUG" if verbose else config.logging.level
    log_dir = config.logging.directory
    if config.logging.file and not log_dir:
        log_dir = get_config().logs_dir
    configure_logging(level=level, log_file=config.logging.file, log_dir=log_dir)
    return config, out_dir or get_config().run_dir(command)


def handle_errors(command: str) -> Callable:
    """예외를 ✗ 메시지와 종료 코드 1로 변환"""
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            verbose = kwargs.get("verbose", False)
            try:
                return func(*args, **kwargs)
            except click.exceptions.Exit:
                raise
            except Exception as e:
                console.print(f"[bold red]✗[/] {command} 실행 중 오류가 발생했습니다: {e}")
                if verbose:
                    console.print(traceback.format_exc())
                sys.exit(1)
        return wrapper
    return decorator


def _parse_points(ctx: click.Context, param: click.Parameter, values: Tuple[str, ...]) -> List[ModelParams]:
    points = []
    for value in values:
        parts = value.split(",")
        try:
            alpha, phi, sigma, rho = (float(p) for p in parts)
        except ValueError:
            raise click.BadParameter(f"'alpha,phi,sigma,rho' 형식이어야 합니다: {value}")
        try:
            points.append(validate_params(ModelParams(alpha, phi, sigma, rho, ModelKind.MEAN_CORRECTED)))
        except ValueError as e:
            raise click.BadParameter(str(e))
    return points


def _done(out_dir: str) -> None:
    console.print(f"[bold green]✓[/] 완료. 산출물: [cyan]{out_dir}[/]")


@click.group()
@click.version_option(version=__version__)
def cli() -> None:
    """svmc: 평균 보정 상관 오차 확률적 변동성 모형 도구"""
    pass


@cli.command()
@click.argument("project_dir", required=False)
def init(project_dir: Optional[str] = None) -> None:
    """새 svmc 프로젝트 초기화"""
    if project_dir:
        project_path = Path(project_dir)
        console.print(f"[bold green]프로젝트 디렉토리[/] [cyan]{project_dir}[/] 에 새 svmc 프로젝트를 초기화합니다.")
        project_path.mkdir(exist_ok=True, parents=True)
    else:
        project_path = Path.cwd()
        console.print("[bold green]현재 디렉토리에 새 svmc 프로젝트를 초기화합니다.[/]")

    for name in ("config", "data", "runs", "logs"):
        (project_path / name).mkdir(exist_ok=True)

    config = generate_default_config()
    config_path = project_path / "config" / "svmc.yaml"
    with open(config_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config, f, default_flow_style=False, sort_keys=False, allow_unicode=True)

    data_path = project_path / "data" / "sample_prices.csv"
    generate_sample_csv(str(data_path), RunConfig().model.to_params())

    with open(project_path / "README.md", "w", encoding="utf-8") as f:
        f.write("""# svmc 프로젝트

## 디렉토리 구조

- `config/`: 설정 파일
- `data/`: 가격/수익률 CSV (`sample_prices.csv` 는 모형에서 생성한 예시)
- `runs/`: 명령 산출물
- `logs/`: 로그 파일

## 시작하기

```bash
svmc fit data/sample_prices.csv --config config/svmc.yaml --iters 18000 --burn 3000 --thin 5 --out runs/fit
svmc gof data/sample_prices.csv runs/fit --out runs/gof
```
""")

    console.print("[bold green]✓[/] 프로젝트가 성공적으로 초기화되었습니다!")
    console.print(f"기본 설정: [cyan]{config_path}[/]")
    console.print(f"예시 자료: [cyan]{data_path}[/]")


@cli.command()
def info() -> None:
    """svmc 및 시스템 정보 표시"""
    console.print(Panel.fit("[bold]svmc 정보[/]", border_style="green"))

    table = Table()
    table.add_column("항목", style="cyan")
    table.add_column("값", style="green")
    table.add_row("버전", __version__)
    table.add_row("Python", sys.version.split()[0])
    table.add_row("플랫폼", sys.platform)
    table.add_row("모형", ", ".join(f"{k.value} ({k.label})" for k in ModelKind))

    discover_plugins()
    extractors = PluginRegistry.list_extractors()
    loaders = PluginRegistry.list_loaders()
    table.add_row("Extractors", ", ".join(extractors) if extractors else "없음")
    table.add_row("Loaders", ", ".join(loaders) if loaders else "없음")
    table.add_row("출력 경로", os.environ.get("SVMC_OUTPUT_PATH", "~/.svmc"))
    console.print(table)


@cli.command()
@click.argument("config_file", required=True, type=click.Path(exists=True, dir_okay=False))
def validate(config_file: str) -> None:
    """설정 파일 검증"""
    console.print(f"[bold green]설정 파일[/] [cyan]{config_file}[/] 를 검증합니다.")
    try:
        config = load_config(config_file)
    except Exception as e:
        console.print(f"[bold red]✗[/] 설정 파일 검증 중 오류 발생: {e}")
        sys.exit(1)

    try:
        validate_params(config.model.to_params())
    except ValueError as e:
        console.print(f"[bold red]✗[/] 모형 모수가 유효하지 않습니다: {e}")
        sys.exit(1)

    console.print("[bold green]✓[/] 설정 파일 스키마가 유효합니다.")
    table = Table(title="적용된 설정")
    table.add_column("섹션", style="cyan")
    table.add_column("값", style="green")
    for section, values in config.snapshot().items():
        table.add_row(section, str(values))
    console.print(table)


@cli.command()
@common_options
@model_options
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), help="마스터 시드")
@click.option("--n-paths", type=click.IntRange(min=1), help="경로 수")
@click.option("--horizon", type=click.IntRange(min=1), help="경로 길이 T")
@click.option("--h0", type=float, help="고정 초기 상태 h_0 (생략 시 정상 분포에서 추출)")
@handle_errors("simulate")
def simulate(**options: Any) -> None:
    """모형 경로 시뮬레이션 -> paths.csv"""
    config, out_dir = _prepare("simulate", options)
    paths = Pipeline(config, out_dir).simulate()
    console.print(
        f"[bold green]✓[/] 경로 {len(paths)}개 x {config.simulation.horizon} 시점 "
        f"({config.model.kind.label}, 시드 {config.simulation.seed})"
    )
    _done(out_dir)


@cli.command()
@common_options
@model_options
@click.option("--k-max", type=click.IntRange(min=1), help="선행-후행 최대 시차")
@handle_errors("moments")
def moments(**options: Any) -> None:
    """닫힌 형태 적률과 선행-후행 상관 -> moments.json"""
    config, out_dir = _prepare("moments", options)
    result = Pipeline(config, out_dir).moments()

    table = Table(title=f"{config.model.kind.label} 닫힌 형태 적률")
    table.add_column("항목", style="cyan")
    table.add_column("값", style="green", justify="right")
    for name, value in result["moments"].items():
        table.add_row(name, f"{value:.6g}")
    for k, value in result["leadlag"]["correlation"].items():
        table.add_row(f"corr(r_t, h_t{int(k):+d})", f"{value:.6g}")
    console.print(table)
    _done(out_dir)


@cli.command()
@common_options
@click.option("--n", type=click.IntRange(min=10_000), help="점당 표본 수")
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), help="마스터 시드")
@click.option("--point", "points", multiple=True, callback=_parse_points,
              help="검증할 모수 점 alpha,phi,sigma,rho (여러 번 지정 가능, 생략 시 135점 격자)")
@handle_errors("verify")
def verify(points: List[ModelParams], **options: Any) -> None:
    """닫힌 형태 값을 몬테카를로 오라클과 비교 -> verify.json"""
    config, out_dir = _prepare("verify", options)
    total = len(points) if points else 135
    with progress_bar("검증 중", total) as update:
        result = Pipeline(config, out_dir).verify(points or None, progress=update)

    counts = result.counts
    table = Table(title="검증 결과")
    table.add_column("상태", style="cyan")
    table.add_column("개수", style="green", justify="right")
    for status, count in counts.items():
        table.add_row(status, str(count))
    console.print(table)

    for row in result.rows:
        if row.status == "fail":
            console.print(
                f"[bold red]✗[/] 점 {row.point} {row.quantity}: 닫힌 형태 {row.closed_form:.6g}, "
                f"MC {row.estimate.value:.6g} (z={row.z:.2f})"
            )
    if not result.passed:
        console.print(f"[bold red]✗[/] 검증 실패: {counts['fail']}개 항목")
        sys.exit(1)
    _done(out_dir)


@cli.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@mode_option
@common_options
@click.option("--model", type=click.Choice(MODEL_CHOICES, case_sensitive=False), help="모형 변형")
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), help="체인 시드")
@click.option("--iters", type=click.IntRange(min=1), help="전체 반복 수")
@click.option("--burn", type=click.IntRange(min=0), help="번인 반복 수")
@click.option("--thin", type=click.IntRange(min=1), help="솎아내기 간격")
@click.option("--chains", type=click.IntRange(min=1), help="체인 수")
@handle_errors("fit")
def fit(data: str, mode: str, **options: Any) -> None:
    """MCMC 사후 표본 추출 -> chain.csv, latent.csv, summary.json"""
    config, out_dir = _prepare("fit", options)
    with spinner(f"{config.model.kind.label} 샘플링 중"):
        chains = Pipeline(config, out_dir).fit(data, mode)

    summary = posterior_summary(chains[0])
    table = Table(title=f"{config.model.kind.label} 사후 요약 ({len(chains[0])}개 표본)")
    table.add_column("모수", style="cyan")
    table.add_column("평균", style="green", justify="right")
    table.add_column("표준편차", style="green", justify="right")
    for row in summary.itertuples(index=False):
        table.add_row(row.parameter, f"{row.mean:.5g}", f"{row.sd:.3g}")
    console.print(table)
    rates = ", ".join(f"{b}={v:.2f}" for b, v in chains[0].acceptance_rates.items())
    console.print(f"채택률: {rates}")
    _done(out_dir)


@cli.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.argument("fit_dir", type=click.Path(exists=True, file_okay=False))
@mode_option
@common_options
@click.option("--k-max", type=click.IntRange(min=1), help="경험적 선행-후행 최대 시차")
@handle_errors("gof")
def gof(data: str, fit_dir: str, mode: str, **options: Any) -> None:
    """적합도 보고서 -> gof.json, gof.txt"""
    config, out_dir = _prepare("gof", options)
    Pipeline(config, out_dir).gof(data, fit_dir, mode)
    with open(os.path.join(out_dir, "gof.txt"), "r", encoding="utf-8") as f:
        console.print(f.read(), markup=False, highlight=False)
    _done(out_dir)


@cli.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.argument("fit_dirs", nargs=-1, required=True, type=click.Path(exists=True, file_okay=False))
@mode_option
@common_options
@click.option("--k-max", type=click.IntRange(min=1), help="경험적 선행-후행 최대 시차")
@handle_errors("report")
def report(data: str, fit_dirs: Tuple[str, ...], mode: str, **options: Any) -> None:
    """여러 적합 결과의 사후 요약과 적합도 표 -> report.json, report.txt"""
    config, out_dir = _prepare("report", options)
    Pipeline(config, out_dir).report(data, list(fit_dirs), mode)
    with open(os.path.join(out_dir, "report.txt"), "r", encoding="utf-8") as f:
        console.print(f.read(), markup=False, highlight=False)
    _done(out_dir)


if __name__ == "__main__":
    cli()
