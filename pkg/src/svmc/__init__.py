"""
SVMC - 상관 오차 확률적 변동성 모형(평균 보정 SVM) 도구
"""

__version__ = "0.1.0"
