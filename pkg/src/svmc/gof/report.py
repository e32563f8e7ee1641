"""
보고서 표 렌더링 모듈

사후 요약 표(모형별 사후 평균과 괄호 안 표준편차)와 적합도 표(자료 열과
모형별 열)를 rich 표로 만들어 일반 텍스트로 내보냅니다.
"""
import io
import math
from typing import Any, Dict, List, Mapping, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

from svmc.gof.measures import DescriptiveStats, GofReport
from svmc.models.core import ModelKind

PARAMETER_ROWS = ("alpha", "phi", "sigma", "rho")
MISSING = "-"


def _fmt(value: float, digits: int = 4) -> str:
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return MISSING
    magnitude = abs(value)
    if magnitude != 0.0 and (magnitude < 1e-3 or magnitude >= 1e5):
        return f"{value:.{digits}e}"
    return f"{value:.{digits}f}"


def _lag_label(k: int) -> str:
    if k == 0:
        return "corr(r_t, h_t)"
    if k > 0:
        return f"corr(r_t, h_t+{k})"
    return f"corr(r_t, h_t-{-k})"


def render_text(table: Table, width: int = 120) -> str:
    """rich 표를 일반 텍스트로 변환"""
    console = Console(file=io.StringIO(), width=width, record=True, color_system=None)
    console.print(table)
    return console.export_text()


def posterior_table(summaries: Mapping[ModelKind, pd.DataFrame]) -> Table:
    """모형별 사후 평균 (표준편차) 표

    Args:
        summaries: 모형 변형 -> posterior_summary 결과
    """
    table = Table(title="Posterior means (sd)")
    table.add_column("Parameter")
    for kind in summaries:
        table.add_column(kind.label, justify="right")

    for name in PARAMETER_ROWS:
        cells = []
        for summary in summaries.values():
            row = summary[summary["parameter"] == name]
            if row.empty:
                cells.append(MISSING)
            else:
                mean, sd = float(row["mean"].iloc[0]), float(row["sd"].iloc[0])
                cells.append(f"{_fmt(mean)} ({_fmt(sd)})")
        table.add_row(name, *cells)
    return table


def gof_table(data: DescriptiveStats, reports: Sequence[GofReport]) -> Table:
    """적합도 표: Mean, Variance, Skewness, Kurtosis, corr, Deviance, MSPE

    모형 열의 corr 행은 plug-in 모수의 닫힌 형태 값이고, "(path)" 행은
    사후 평균 경로로 계산한 표본 상관입니다.
    """
    table = Table(title="Goodness of fit")
    table.add_column("Measure")
    table.add_column("Data", justify="right")
    for report in reports:
        table.add_column(report.kind.label, justify="right")

    table.add_row("Mean", _fmt(data.mean), *[_fmt(r.expected_return) for r in reports])
    table.add_row("Variance", _fmt(data.variance), *[_fmt(r.model_moments.variance) for r in reports])
    table.add_row("Skewness", _fmt(data.skewness), *[_fmt(r.model_moments.skewness) for r in reports])
    table.add_row("Kurtosis", _fmt(data.kurtosis), *[_fmt(r.model_moments.kurtosis) for r in reports])

    lags: List[int] = []
    for report in reports:
        lags.extend(k for k in report.model_leadlag if k not in lags)
    for k in lags:
        table.add_row(_lag_label(k), MISSING, *[_fmt(r.model_leadlag.get(k)) for r in reports])
        table.add_row(
            f"{_lag_label(k)} (path)", MISSING,
            *[_fmt(r.empirical_leadlag.get(k)) for r in reports],
        )

    table.add_row("Deviance", MISSING, *[_fmt(r.mean_deviance, 2) for r in reports])
    table.add_row("MSPE", MISSING, *[_fmt(r.mspe) for r in reports])
    return table


def report_dict(
    data: DescriptiveStats,
    summaries: Mapping[ModelKind, pd.DataFrame],
    reports: Sequence[GofReport],
) -> Dict[str, Any]:
    """report.json 내용"""
    return {
        "data": data.to_dict(),
        "posterior": {
            kind.value: summary.to_dict(orient="records") for kind, summary in summaries.items()
        },
        "gof": {report.kind.value: report.to_dict() for report in reports},
    }
