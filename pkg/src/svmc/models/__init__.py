"""
모형 정의와 닫힌 형태 적률
"""
from svmc.models.core import (
    ModelKind,
    ModelParams,
    SeriesPair,
    mean_term,
    return_conditional,
    stationary_variance,
    validate,
    volatility_conditional,
)
from svmc.models.moments import LeadLagProfile, MomentSet, leadlag, mean_correction, moment_set

__all__ = [
    "ModelKind",
    "ModelParams",
    "SeriesPair",
    "mean_term",
    "return_conditional",
    "stationary_variance",
    "validate",
    "volatility_conditional",
    "LeadLagProfile",
    "MomentSet",
    "leadlag",
    "mean_correction",
    "moment_set",
]
