"""
공통 타입 정의

도메인 전반에서 사용되는 타입 힌트와 타입 별칭을 정의합니다.
"""

from typing import Any, Generic, TypeVar

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict


# ====================
# Generic Type Variables
# ====================

T = TypeVar("T")  # 일반 타입
TModel = TypeVar("TModel", bound=BaseModel)  # Pydantic 모델

# D차원 실수 벡터 (값 점, 보상, 가중치)
Vector = npt.NDArray[np.float64]


# ====================
# Common Response Types
# ====================


class ServiceResult(BaseModel, Generic[T]):
    """
    서비스 계층 결과 래퍼

    서비스 메서드의 실행 결과를 성공/실패 상태와 함께 반환합니다.
    실패 시 metadata["exit_code"]가 CLI 종료 코드가 됩니다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    success: bool
    data: T | None = None
    error: str | None = None
    metadata: dict[str, Any] | None = None

    @classmethod
    def ok(cls, data: T, metadata: dict[str, Any] | None = None) -> "ServiceResult[T]":
        """성공 결과 생성"""
        return cls(success=True, data=data, metadata=metadata)

    @classmethod
    def fail(cls, error: str, metadata: dict[str, Any] | None = None) -> "ServiceResult[T]":
        """실패 결과 생성"""
        return cls(success=False, error=error, metadata=metadata)

    @property
    def exit_code(self) -> int:
        if self.success:
            return 0
        return int((self.metadata or {}).get("exit_code", 2))


# ====================
# Data Transfer Types
# ====================


class ProviderInput(BaseModel):
    """
    Provider 입력 데이터 베이스

    모든 Provider 입력은 이 클래스를 상속받아야 합니다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class ProviderOutput(BaseModel):
    """
    Provider 출력 데이터 베이스

    모든 Provider 출력은 이 클래스를 상속받아야 합니다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class CalculatorInput(BaseModel):
    """
    Calculator 입력 데이터 베이스

    모델, 점 집합 등 도메인 객체를 그대로 담을 수 있도록 arbitrary type을 허용합니다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class CalculatorOutput(BaseModel):
    """
    Calculator 출력 데이터 베이스
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class FormatterInput(BaseModel):
    """
    Formatter 입력 데이터 베이스
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class FormatterOutput(BaseModel):
    """
    Formatter 출력 데이터 베이스

    content는 파일로 쓰거나 표준 출력으로 내보낼 직렬화 결과입니다.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)


class ArtifactInput(ProviderInput):
    """디스크에 쓸 산출물 (경로 + 직렬화된 내용)."""

    path: str
    content: str


class ArtifactOutput(ProviderOutput):
    path: str
    bytes_written: int
