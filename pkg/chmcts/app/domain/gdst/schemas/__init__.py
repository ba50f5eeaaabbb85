"""
GDST Domain Schemas
"""

from pydantic import BaseModel, Field

from chmcts.app.shared.types import CalculatorInput, CalculatorOutput, FormatterInput
from chmcts.app.domain.gdst.models import GdstConfig, GdstInstance, TreasureCell


class GenerateInput(CalculatorInput):
    config: GdstConfig


class GenerateOutput(CalculatorOutput):
    instance: GdstInstance


class GenEnvRequest(BaseModel):
    """gen-env 명령 요청"""

    config: GdstConfig
    out: str = Field(..., description="모델 JSON 경로")
    raw: bool = Field(default=False, description="정규화 대신 원 단위 모델을 저장")
    ascii: bool = Field(default=False, description="ASCII 격자를 응답에 포함")


class GenEnvResponse(BaseModel):
    model: str
    out: str
    metadata_out: str
    num_states: int
    horizon: int
    rows: int
    columns: int
    treasures: list[TreasureCell]
    utopian_point: list[float]
    ascii: str | None = None


class InstanceFormatterInput(FormatterInput):
    instance: GdstInstance
    model_file: str | None = None
    raw: bool = False
