"""
BaseCalculator: 계산 로직 추상 클래스

비즈니스 로직 중 계산, 변환, 분석 등의 순수 함수적 작업을 담당합니다.
상태를 가지지 않으며 외부 의존성 없이 동작해야 합니다.
"""

from abc import ABC, abstractmethod
from typing import Generic, Sequence, TypeVar

import numpy as np
from scipy import stats

from chmcts.app.shared.types import CalculatorInput, CalculatorOutput

# 제네릭 타입 변수
TInput = TypeVar("TInput", bound=CalculatorInput)
TOutput = TypeVar("TOutput", bound=CalculatorOutput)


class BaseCalculator(ABC, Generic[TInput, TOutput]):
    """
    Calculator 추상 베이스 클래스

    책임:
        - 알고리즘 적용 (CHVI, 트리 탐색, 후회 계산)
        - 데이터 집계

    원칙:
        - 동일 입력(시드 포함) → 동일 출력
        - 외부 상태에 의존하지 않습니다
        - 파일 입출력은 Provider/Formatter의 몫입니다

    사용 예시:
        class ChviSolver(BaseCalculator[ChviInput, ChviOutput]):
            async def calculate(self, input_data: ChviInput) -> ChviOutput:
                return ChviOutput(solution=self.solve(input_data.model))
    """

    @abstractmethod
    async def calculate(self, input_data: TInput) -> TOutput:
        """
        계산을 수행합니다.

        Args:
            input_data: 계산에 필요한 입력 데이터

        Returns:
            TOutput: 계산 결과

        Raises:
            CalculatorException: 계산 중 오류 발생 시
        """
        raise NotImplementedError("Subclass must implement 'calculate' method")


class StatisticsCalculator(BaseCalculator[TInput, TOutput], ABC):
    """
    통계 계산 특화 Calculator

    반복 실행(replication) 결과 집계에 쓰는 유틸리티를 제공합니다.
    """

    confidence_level: float = 0.95

    def calculate_mean(self, values: Sequence[float]) -> float:
        if len(values) == 0:
            return 0.0
        return float(np.mean(values))

    def calculate_std_dev(self, values: Sequence[float]) -> float:
        """표본 표준편차 (ddof=1). 값이 2개 미만이면 0."""
        if len(values) < 2:
            return 0.0
        return float(np.std(values, ddof=1))

    def calculate_confidence_interval(self, values: Sequence[float]) -> tuple[float, float]:
        """
        정규 근사 신뢰구간을 계산합니다.

        Args:
            values: 반복 실행별 값

        Returns:
            tuple[float, float]: (하한, 상한). 값이 1개면 폭 0
        """
        mean = self.calculate_mean(values)
        if len(values) < 2:
            return mean, mean
        half_width = self.z_value * self.calculate_std_dev(values) / float(np.sqrt(len(values)))
        return mean - half_width, mean + half_width

    @property
    def z_value(self) -> float:
        return float(stats.norm.ppf(0.5 + self.confidence_level / 2.0))

    def calculate_band(self, matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        열마다 평균과 신뢰구간 (행 = 반복 실행).

        Returns:
            (평균, 하한, 상한). 행이 1개면 폭 0
        """
        values = np.asarray(matrix, dtype=np.float64)
        mean = values.mean(axis=0)
        if values.shape[0] < 2:
            return mean, mean.copy(), mean.copy()
        half_width = self.z_value * values.std(axis=0, ddof=1) / np.sqrt(values.shape[0])
        return mean, mean - half_width, mean + half_width

