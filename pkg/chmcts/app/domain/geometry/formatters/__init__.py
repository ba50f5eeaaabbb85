"""
Geometry Domain Formatters

점 집합 CSV 직렬화 (한 행에 점 하나). JSON은 PointSet.to_list를 씁니다.
"""

from typing import Any

from chmcts.app.shared.base import CSVFormatter
from chmcts.app.domain.geometry.schemas import PointSetFormatterInput, TextOutput


class PointSetCSVFormatter(CSVFormatter[PointSetFormatterInput, TextOutput]):
    """헤더 v0..v{D-1}, 정규 순서 행."""

    def __init__(self, dimension: int = 2):
        self.dimension = dimension

    def get_csv_headers(self) -> list[str]:
        return [f"v{i}" for i in range(self.dimension)]

    def to_csv_row(self, output_data: Any) -> list[Any]:
        return [float(x) for x in output_data]

    async def format(self, input_data: PointSetFormatterInput) -> TextOutput:
        self.dimension = input_data.points.dimension
        return TextOutput(content=self.render_csv(list(input_data.points)), media_type="text/csv")


__all__ = ["PointSetCSVFormatter"]
