"""
유틸리티 모듈
"""
from svmc.utils.logging import configure_logging, get_logger

__all__ = ["configure_logging", "get_logger"]
