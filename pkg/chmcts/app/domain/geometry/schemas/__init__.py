"""
Geometry Domain Schemas

점 집합 요약과 직렬화용 입출력 스키마입니다.
"""

from pydantic import Field

from chmcts.app.shared.types import (
    CalculatorInput,
    CalculatorOutput,
    FormatterInput,
    FormatterOutput,
)
from chmcts.app.domain.geometry.models import PointSet


class FrontSummaryInput(CalculatorInput):
    points: PointSet
    reference_point: list[float]


class FrontSummary(CalculatorOutput):
    """점 집합 요약 (JSON 출력에 그대로 들어갑니다)."""

    size: int = Field(..., ge=0, description="점 개수")
    points: list[list[float]] = Field(default_factory=list, description="정규 순서의 점들")
    hypervolume: float | None = Field(default=None, description="D ≤ 2일 때 하이퍼볼륨")
    reference_point: list[float] = Field(default_factory=list, description="하이퍼볼륨 기준점 o")
    ideal_point: list[float] = Field(default_factory=list, description="성분별 최댓값")


class PointSetFormatterInput(FormatterInput):
    points: PointSet


class TextOutput(FormatterOutput):
    """직렬화된 텍스트 (파일 또는 stdout)."""

    content: str
    media_type: str = "text/plain"
