"""
적합도 측정과 보고서
"""
from svmc.gof.measures import (
    DegenerateSeries,
    DescriptiveStats,
    GofReport,
    TooShort,
    descriptive_stats,
    deviance,
    empirical_leadlag,
    gof_report,
    mean_deviance,
    mspe,
)
from svmc.gof.report import gof_table, posterior_table, render_text, report_dict

__all__ = [
    "DegenerateSeries",
    "DescriptiveStats",
    "GofReport",
    "TooShort",
    "descriptive_stats",
    "deviance",
    "empirical_leadlag",
    "gof_report",
    "mean_deviance",
    "mspe",
    "gof_table",
    "posterior_table",
    "render_text",
    "report_dict",
]
