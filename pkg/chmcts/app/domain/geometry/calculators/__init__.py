"""
Geometry Domain Calculators

스칼라화, 가중치 표본 추출, D ≥ 3 볼록 가지치기 LP, 전선 요약 계산을 담당합니다.
"""

import itertools
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from chmcts.app.shared.base import BaseCalculator
from chmcts.app.shared.exceptions import CalculatorException, ValidationException
from chmcts.app.shared.types import Vector
from chmcts.app.domain.geometry.models import PointSet, WeightVector, as_weights
from chmcts.app.domain.geometry.schemas import FrontSummary, FrontSummaryInput


class ConvexCoverageLP:
    """
    가중치 공간 LP 기반 CCS 판정

    점 p에 대해 max δ s.t. wᵀ(p − q) ≥ δ (모든 q ≠ p), w ∈ 𝒲_D 를 풀고
    δ > tolerance 이면 p를 유지합니다.
    """

    def __init__(self, tolerance: float = 1e-12):
        self.tolerance = tolerance

    def margin(self, candidate: Vector, others: np.ndarray) -> float:
        """p가 다른 모든 점보다 앞서는 최대 여유 δ."""
        dimension = candidate.shape[0]
        if others.shape[0] == 0:
            return float("inf")
        # 변수 x = (w_1..w_D, δ), 목적: −δ 최소화
        objective = np.zeros(dimension + 1)
        objective[-1] = -1.0
        a_ub = np.hstack([others - candidate, np.ones((others.shape[0], 1))])
        b_ub = np.zeros(others.shape[0])
        a_eq = np.zeros((1, dimension + 1))
        a_eq[0, :dimension] = 1.0
        bounds = [(0.0, None)] * dimension + [(None, None)]
        result = linprog(
            objective,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=np.array([1.0]),
            bounds=bounds,
            method="highs",
        )
        if result.status != 0:
            raise CalculatorException(
                f"Convex pruning LP failed: {result.message}",
                details={"status": int(result.status), "point": candidate.tolist()},
            )
        return float(-result.fun)

    def supported_mask(self, points: np.ndarray) -> np.ndarray:
        mask = np.zeros(points.shape[0], dtype=bool)
        for index in range(points.shape[0]):
            others = np.delete(points, index, axis=0)
            mask[index] = self.margin(points[index], others) > self.tolerance
        return mask


class Scalarization:
    """
    스칼라화 함수 모음

    모두 순수 함수이며 점 집합을 바꾸지 않습니다.
    """

    @staticmethod
    def linear(
        value: Sequence[float] | Vector, w: WeightVector | Sequence[float] | Vector
    ) -> float:
        """f(v; w) = wᵀv"""
        v = np.asarray(value, dtype=np.float64)
        weights = as_weights(w)
        if v.shape != weights.shape:
            raise ValidationException(
                f"Dimension mismatch: value has D={v.shape[0]}, weights have D={weights.shape[0]}"
            )
        return float(weights @ v)

    @staticmethod
    def max_scalarized(
        points: PointSet, w: WeightVector | Sequence[float] | Vector
    ) -> tuple[tuple[float, ...], float]:
        """
        wᵀp를 최대화하는 점과 그 값.

        동률이면 사전식으로 가장 큰 점을 고릅니다 (정규 순서의 첫 후보).
        """
        if points.is_empty():
            raise ValidationException("max_scalarized requires a nonempty point set")
        weights = as_weights(w)
        if weights.shape[0] != points.dimension:
            raise ValidationException(
                f"Dimension mismatch: set has D={points.dimension}, "
                f"weights have D={weights.shape[0]}"
            )
        values = points.points @ weights
        best = int(np.argmax(values))  # argmax는 첫 최댓값 = 사전식 최대
        return tuple(float(x) for x in points.points[best]), float(values[best])

    @staticmethod
    def chebychev(
        points: PointSet,
        w: WeightVector | Sequence[float] | Vector,
        utopian: Sequence[float] | Vector,
    ) -> float:
        """min_p max_i w_i |p_i − z_i| (작을수록 좋음)."""
        if points.is_empty():
            raise ValidationException("chebychev scalarization requires a nonempty point set")
        weights = as_weights(w)
        z = np.asarray(utopian, dtype=np.float64)
        gaps = weights * np.abs(points.points - z)
        return float(gaps.max(axis=1).min())

    @staticmethod
    def weight_grid(dimension: int, resolution: int) -> np.ndarray:
        """
        단체 위 격자 {k/resolution : Σk = resolution}.

        D=2, resolution=100 이면 101개 가중치.
        """
        if dimension < 1 or resolution < 1:
            raise ValidationException("weight_grid needs dimension >= 1 and resolution >= 1")
        if dimension == 1:
            return np.ones((1, 1))
        rows = []
        for cuts in itertools.combinations(range(resolution + dimension - 1), dimension - 1):
            bounds = (-1,) + cuts + (resolution + dimension - 1,)
            rows.append([bounds[i + 1] - bounds[i] - 1 for i in range(dimension)])
        return np.asarray(rows, dtype=np.float64) / resolution


class SimplexSampler:
    """
    단체 위 균등 가중치 표본

    정렬된 균등 난수의 간격(spacing)을 사용합니다. D=2이면 λ ~ U[0,1]과 같습니다.
    """

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ValidationException("dimension must be >= 1")
        self.dimension = dimension

    def sample_many(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.dimension == 1:
            return np.ones((count, 1))
        cuts = np.sort(rng.random((count, self.dimension - 1)), axis=1)
        padded = np.hstack([np.zeros((count, 1)), cuts, np.ones((count, 1))])
        return np.diff(padded, axis=1)

    def sample(self, rng: np.random.Generator) -> Vector:
        return self.sample_many(rng, 1)[0]


class FrontSummaryCalculator(BaseCalculator[FrontSummaryInput, FrontSummary]):
    """
    점 집합 요약 (크기, 하이퍼볼륨, 성분별 최댓값)

    D ≥ 3이면 하이퍼볼륨을 None으로 둡니다.
    """

    async def calculate(self, input_data: FrontSummaryInput) -> FrontSummary:
        points = input_data.points
        hypervolume: float | None = None
        if points.dimension <= 2:
            hypervolume = points.hypervolume(input_data.reference_point)
        ideal = points.points.max(axis=0).tolist() if not points.is_empty() else []
        return FrontSummary(
            size=len(points),
            points=points.to_list(),
            hypervolume=hypervolume,
            reference_point=[float(x) for x in input_data.reference_point],
            ideal_point=[float(x) for x in ideal],
        )


__all__ = [
    "ConvexCoverageLP",
    "Scalarization",
    "SimplexSampler",
    "FrontSummaryCalculator",
]
