"""
Base 클래스 모듈

모든 도메인에서 상속받아 사용할 추상 베이스 클래스들을 정의합니다.
"""

from chmcts.app.shared.base.calculator import (
    BaseCalculator,
    StatisticsCalculator,
)
from chmcts.app.shared.base.formatter import (
    BaseFormatter,
    ChartDataFormatter,
    CSVFormatter,
    JSONFormatter,
)
from chmcts.app.shared.base.provider import ArtifactWriter, BaseProvider, FileProvider
from chmcts.app.shared.base.service import BaseService, BatchService

__all__ = [
    "BaseService",
    "BatchService",
    "BaseProvider",
    "FileProvider",
    "ArtifactWriter",
    "BaseCalculator",
    "StatisticsCalculator",
    "BaseFormatter",
    "JSONFormatter",
    "CSVFormatter",
    "ChartDataFormatter",
]
