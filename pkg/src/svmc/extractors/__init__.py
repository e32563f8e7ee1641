"""
수익률 자료 추출기 모듈
"""
from svmc.extractors.base import (
    EmptyInput,
    Extractor,
    IngestError,
    NonMonotoneDates,
    NonPositivePrice,
    ParseError,
)
from svmc.extractors.csv import PriceCSVExtractor, ReturnCSVExtractor

__all__ = [
    "EmptyInput",
    "Extractor",
    "IngestError",
    "NonMonotoneDates",
    "NonPositivePrice",
    "ParseError",
    "PriceCSVExtractor",
    "ReturnCSVExtractor",
]
