"""
BaseFormatter: 데이터 포맷팅 추상 클래스

계산된 데이터를 출력 형식(JSON, CSV, SVG)으로 변환하는 책임을 가집니다.
"""

import csv
import io
import json
from abc import ABC, abstractmethod
from typing import Any, Generic, Sequence, TypeVar

import numpy as np
from pydantic import BaseModel

from chmcts.app.shared.types import FormatterInput, FormatterOutput

# 제네릭 타입 변수
TInput = TypeVar("TInput", bound=FormatterInput)
TOutput = TypeVar("TOutput", bound=FormatterOutput)


class BaseFormatter(ABC, Generic[TInput, TOutput]):
    """
    Formatter 추상 베이스 클래스

    책임:
        - 내부 데이터를 출력 형식으로 변환
        - 데이터 직렬화

    원칙:
        - 비즈니스 로직을 포함하지 않습니다
        - 같은 입력은 바이트 단위로 같은 출력을 만듭니다 (재현성)
    """

    @abstractmethod
    async def format(self, input_data: TInput) -> TOutput:
        """
        데이터를 포맷팅합니다.

        Raises:
            FormatterException: 포맷팅 중 오류 발생 시
        """
        raise NotImplementedError("Subclass must implement 'format' method")

    def format_float(self, value: float) -> str:
        """repr 기반 float 표기 (왕복 가능, 실행 간 동일)."""
        return repr(float(value))


class JSONFormatter(BaseFormatter[TInput, TOutput], ABC):
    """
    JSON 출력 특화 Formatter
    """

    def remove_null_fields(self, data: dict[str, Any]) -> dict[str, Any]:
        return {k: v for k, v in data.items() if v is not None}

    def dumps(self, data: Any) -> str:
        """정렬된 키, 들여쓰기 2의 JSON 문자열 (끝에 개행)."""
        return json.dumps(self._plain(data), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def _plain(self, value: Any) -> Any:
        # numpy 값 → 파이썬 기본형
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, BaseModel):
            return self._plain(value.model_dump(mode="json"))
        if isinstance(value, dict):
            return {str(k): self._plain(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self._plain(v) for v in value]
        return value


class CSVFormatter(BaseFormatter[TInput, TOutput], ABC):
    """
    CSV 파일 생성 특화 Formatter

    헤더는 get_csv_headers, 행은 to_csv_row가 정의합니다.
    """

    @abstractmethod
    def get_csv_headers(self) -> list[str]:
        raise NotImplementedError("Subclass must implement 'get_csv_headers' method")

    @abstractmethod
    def to_csv_row(self, output_data: Any) -> list[Any]:
        raise NotImplementedError("Subclass must implement 'to_csv_row' method")

    def render_csv(self, records: Sequence[Any]) -> str:
        """
        레코드 목록을 CSV 문자열로 만듭니다.

        float은 format_float(repr)로 적어 실행 간 바이트 단위로 동일하게 유지합니다.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.get_csv_headers())
        for record in records:
            writer.writerow([self._cell(v) for v in self.to_csv_row(record)])
        return buffer.getvalue()

    def _cell(self, value: Any) -> Any:
        if isinstance(value, (float, np.floating)):
            return self.format_float(float(value))
        if isinstance(value, np.integer):
            return int(value)
        return value


class ChartDataFormatter(BaseFormatter[TInput, TOutput], ABC):
    """
    차트 데이터 생성 특화 Formatter

    format_for_chart가 만든 시리즈 구조를 SVG 렌더러가 그립니다.
    """

    @abstractmethod
    def format_for_chart(self, input_data: TInput, chart_type: str) -> dict[str, Any]:
        """
        차트 타입에 맞는 데이터를 생성합니다.

        Returns:
            dict: {"title", "x_label", "y_label", "series": [{"label", "x", "y", "lower", "upper"}]}
        """
        raise NotImplementedError("Subclass must implement 'format_for_chart' method")
