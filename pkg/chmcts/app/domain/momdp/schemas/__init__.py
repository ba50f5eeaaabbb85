"""
MOMDP Domain Schemas

모델 파일(JSON) 구조와 계층 간 입출력 스키마를 정의합니다.
Pydantic v2 모델을 사용합니다.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from chmcts.app.shared.types import (
    CalculatorInput,
    CalculatorOutput,
    FormatterInput,
    ProviderInput,
    ProviderOutput,
)
from chmcts.app.domain.momdp.models import ModelViolation, Momdp


# ====================
# Model File Schemas
# ====================


class RewardEntry(BaseModel):
    s: int = Field(..., ge=0, description="상태")
    a: int = Field(..., ge=0, description="행동")
    vector: list[float] = Field(..., min_length=1, description="D차원 보상")


class ArrivalEntry(BaseModel):
    s: int = Field(..., ge=0, description="도착 상태")
    vector: list[float] = Field(..., min_length=1, description="도착 시 더해지는 보상")


class SuccessorEntry(BaseModel):
    s2: int = Field(..., description="후속 상태")
    p: float = Field(..., description="전이 확률")


class TransitionEntry(BaseModel):
    s: int = Field(..., ge=0)
    a: int = Field(..., ge=0)
    successors: list[SuccessorEntry] = Field(default_factory=list)


class MomdpDocument(BaseModel):
    """
    모델 파일 스키마

    필수: num_states, num_actions, num_objectives, horizon, initial_state, terminals,
    rewards, transitions. 나머지는 선택 메타데이터입니다.
    """

    model_config = ConfigDict(
        extra="ignore",
        json_schema_extra={
            "example": {
                "num_states": 3,
                "num_actions": 2,
                "num_objectives": 2,
                "horizon": 1,
                "initial_state": 0,
                "terminals": [1, 2],
                "rewards": [{"s": 0, "a": 0, "vector": [1.0, 0.0]}],
                "transitions": [{"s": 0, "a": 0, "successors": [{"s2": 1, "p": 1.0}]}],
            }
        },
    )

    num_states: int = Field(..., ge=1)
    num_actions: int = Field(..., ge=1)
    num_objectives: int = Field(..., ge=1)
    horizon: int = Field(..., ge=0)
    initial_state: int = Field(..., ge=0)
    terminals: list[int] = Field(default_factory=list)
    rewards: list[RewardEntry] = Field(default_factory=list)
    transitions: list[TransitionEntry] = Field(default_factory=list)

    name: str | None = Field(default=None, description="모델 이름")
    arrival_rewards: list[ArrivalEntry] = Field(default_factory=list, description="상태 도착 보상")
    terminal_bonus: list[float] | None = Field(default=None, description="종료 도착 보너스")
    reference_point: list[float] | None = Field(default=None, description="하이퍼볼륨 기준점 o")
    utopian_point: list[float] | None = Field(default=None, description="유토피아 점 z")
    return_bound: float | None = Field(default=None, gt=0.0, description="스칼라화 누적 보상 상한")

    @model_validator(mode="after")
    def check_metadata_dimensions(self) -> "MomdpDocument":
        for entry in self.arrival_rewards:
            if len(entry.vector) != self.num_objectives:
                raise ValueError(
                    f"arrival reward of state {entry.s} has {len(entry.vector)} components, "
                    f"expected {self.num_objectives}"
                )
        for label in ("terminal_bonus", "reference_point", "utopian_point"):
            vector = getattr(self, label)
            if vector is not None and len(vector) != self.num_objectives:
                raise ValueError(
                    f"{label} has {len(vector)} components, expected {self.num_objectives}"
                )
        return self


# ====================
# Layer I/O Schemas
# ====================


class ModelSourceRequest(BaseModel):
    """모델 출처: 체크인된 fixture 이름 또는 파일 경로 (정확히 하나)."""

    fixture: str | None = None
    path: str | None = None

    @model_validator(mode="after")
    def check_exactly_one(self) -> "ModelSourceRequest":
        if (self.fixture is None) == (self.path is None):
            raise ValueError("exactly one of fixture / path must be given")
        return self


class ModelFileInput(ProviderInput):
    path: str


class FixtureInput(ProviderInput):
    name: str


class ModelOutput(ProviderOutput):
    model: Momdp
    source: str


class ValidationInput(CalculatorInput):
    model: Momdp


class ValidationReport(CalculatorOutput):
    violations: list[ModelViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class ModelFormatterInput(FormatterInput):
    model: Momdp


class FixtureListing(BaseModel):
    name: str
    num_states: int
    num_actions: int
    num_objectives: int
    horizon: int
    path: str | None = None
