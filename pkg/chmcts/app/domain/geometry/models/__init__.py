"""
Geometry Domain Models

점 집합 대수의 핵심 객체를 정의합니다.
- DominanceRelation: 두 점 사이의 Pareto 지배 관계
- WeightVector: 단체(simplex) 위의 가중치 벡터
- PointSet: 중복 없는 D차원 값 점 집합 (정규 정렬: 사전식 내림차순)
"""

from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from chmcts.app.core.config import get_settings
from chmcts.app.shared.exceptions import ValidationException
from chmcts.app.shared.types import Vector

_MERGE_TOLERANCE = get_settings().MERGE_TOLERANCE
_WEIGHT_SUM_TOLERANCE = 1e-9
_PROBABILITY_SUM_TOLERANCE = 1e-9


class DominanceRelation(str, Enum):
    """
    Pareto 지배 관계

    네 값은 상호 배타적이며 모든 경우를 덮습니다.
    """

    EQUAL = "equal"
    STRICTLY_DOMINATES = "strictly_dominates"
    STRICTLY_DOMINATED = "strictly_dominated"
    INCOMPARABLE = "incomparable"

    @classmethod
    def compare(
        cls, u: Sequence[float] | Vector, v: Sequence[float] | Vector
    ) -> "DominanceRelation":
        """
        u를 기준으로 v와의 관계를 반환합니다.

        Raises:
            ValidationException: 차원이 다를 때
        """
        a = np.asarray(u, dtype=np.float64)
        b = np.asarray(v, dtype=np.float64)
        if a.shape != b.shape:
            raise ValidationException(
                f"Dimension mismatch: {a.shape[-1] if a.ndim else 0} "
                f"vs {b.shape[-1] if b.ndim else 0}",
                details={"left": a.tolist(), "right": b.tolist()},
            )
        weakly_ge = bool(np.all(a >= b))
        weakly_le = bool(np.all(a <= b))
        if weakly_ge and weakly_le:
            return cls.EQUAL
        if weakly_ge:
            return cls.STRICTLY_DOMINATES
        if weakly_le:
            return cls.STRICTLY_DOMINATED
        return cls.INCOMPARABLE


class PruneMode(str, Enum):
    """백업 시 적용할 가지치기 종류."""

    CCS = "ccs"
    PARETO = "pareto"


class WeightVector:
    """
    선형 스칼라화 가중치

    모든 성분 ≥ 0, 합 = 1 (허용 오차 1e-9).
    """

    __slots__ = ("values",)

    def __init__(self, components: Sequence[float] | Vector):
        values = np.asarray(components, dtype=np.float64).reshape(-1)
        if values.size == 0:
            raise ValidationException("Weight vector must have at least one component")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValidationException(
                "Weight components must be finite and nonnegative",
                details={"weights": values.tolist()},
            )
        total = float(values.sum())
        if abs(total - 1.0) > _WEIGHT_SUM_TOLERANCE:
            raise ValidationException(
                f"Weight components sum to {total}, expected 1",
                details={"weights": values.tolist()},
            )
        values.setflags(write=False)
        self.values: Vector = values

    @classmethod
    def uniform(cls, dimension: int) -> "WeightVector":
        """단체의 중심 (1/D, …, 1/D)."""
        return cls(np.full(dimension, 1.0 / dimension))

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def tolist(self) -> list[float]:
        return [float(x) for x in self.values]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightVector):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"WeightVector({self.tolist()})"


def as_weights(w: "WeightVector | Sequence[float] | Vector") -> Vector:
    """WeightVector 또는 배열을 검증 없이 float 배열로 꺼냅니다."""
    if isinstance(w, WeightVector):
        return w.values
    return np.asarray(w, dtype=np.float64)


def _canonical(points: np.ndarray) -> np.ndarray:
    """사전식 내림차순 정렬 후 인접한 근사 중복(성분별 ≤ 1e-12)을 병합합니다."""
    if points.shape[0] <= 1:
        return points
    order = np.lexsort(points.T[::-1])[::-1]
    ordered = points[order]
    gaps = np.abs(np.diff(ordered, axis=0))
    keep = np.ones(ordered.shape[0], dtype=bool)
    keep[1:] = np.any(gaps > _MERGE_TOLERANCE, axis=1)
    return ordered[keep]


class PointSet:
    """
    D차원 값 점의 유한 집합

    생성 시 항상 정규화(정렬 + 중복 병합)되므로 같은 점들의 집합은
    입력 순서와 무관하게 같은 배열을 가집니다. 불변 객체입니다.

    사용 예시:
        front = PointSet([(0, 4), (4, 0), (3, 3)]).prune_pareto()
        value = front.hypervolume((0, 0))
    """

    __slots__ = ("_points",)

    def __init__(
        self, points: Iterable[Sequence[float]] | np.ndarray, dimension: int | None = None
    ):
        array = np.asarray(
            points if isinstance(points, np.ndarray) else list(points),
            dtype=np.float64,
        )
        if array.size == 0:
            if dimension is None:
                raise ValidationException("An empty point set needs an explicit dimension")
            array = np.empty((0, dimension), dtype=np.float64)
        elif array.ndim == 1:
            array = array.reshape(1, -1)
        if array.ndim != 2:
            raise ValidationException(f"Points must form a 2-D array, got shape {array.shape}")
        if dimension is not None and array.shape[1] != dimension:
            raise ValidationException(
                f"Point dimension {array.shape[1]} does not match expected {dimension}"
            )
        if not np.all(np.isfinite(array)):
            raise ValidationException("Point components must be finite")
        canonical = _canonical(array)
        canonical.setflags(write=False)
        self._points = canonical

    @classmethod
    def _trusted(cls, array: np.ndarray) -> "PointSet":
        # 이미 검증된 배열에서 생성 (내부 경로)
        instance = cls.__new__(cls)
        canonical = _canonical(np.ascontiguousarray(array, dtype=np.float64))
        canonical.setflags(write=False)
        instance._points = canonical
        return instance

    @classmethod
    def zero(cls, dimension: int) -> "PointSet":
        """영벡터 하나로 이루어진 집합 {0}."""
        return cls._trusted(np.zeros((1, dimension)))

    # ====================
    # Accessors
    # ====================

    @property
    def points(self) -> np.ndarray:
        """(n, D) 읽기 전용 배열 (정규 순서)."""
        return self._points

    @property
    def dimension(self) -> int:
        return int(self._points.shape[1])

    def is_empty(self) -> bool:
        return self._points.shape[0] == 0

    def __len__(self) -> int:
        return int(self._points.shape[0])

    def __iter__(self) -> Iterator[tuple[float, ...]]:
        for row in self._points:
            yield tuple(float(x) for x in row)

    def __contains__(self, point: object) -> bool:
        candidate = np.asarray(point, dtype=np.float64)
        if candidate.shape != (self.dimension,):
            return False
        return bool(np.any(np.all(np.abs(self._points - candidate) <= _MERGE_TOLERANCE, axis=1)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._points.shape == other._points.shape and bool(
            np.array_equal(self._points, other._points)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PointSet({self.to_list()})"

    def to_list(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self._points]

    def allclose(self, other: "PointSet", atol: float = 1e-9) -> bool:
        """허용 오차 내 집합 동등성 (정규 순서가 같다고 가정)."""
        return self._points.shape == other._points.shape and bool(
            np.allclose(self._points, other._points, rtol=0.0, atol=atol)
        )

    def _require_nonempty(self, operation: str) -> None:
        if self.is_empty():
            raise ValidationException(f"{operation} requires a nonempty point set")

    def _require_dimension(self, dimension: int) -> None:
        if dimension != self.dimension:
            raise ValidationException(
                f"Dimension mismatch: set has D={self.dimension}, got {dimension}"
            )

    # ====================
    # Pruning
    # ====================

    def prune_pareto(self) -> "PointSet":
        """
        강하게 지배되지 않는 점만 남깁니다.

        정규 순서에서 q가 p를 지배하면 q가 p보다 앞에 오므로, 앞서 남긴 점들과만
        비교하면 됩니다. D=2는 두 번째 성분의 누적 최댓값으로 한 번에 처리합니다.
        """
        self._require_nonempty("prune_pareto")
        pts = self._points
        if pts.shape[0] <= 1:
            return self
        if self.dimension == 1:
            return PointSet._trusted(pts[:1])
        if self.dimension == 2:
            second = pts[:, 1]
            running = np.maximum.accumulate(second)
            keep = np.empty(pts.shape[0], dtype=bool)
            keep[0] = True
            keep[1:] = second[1:] > running[:-1]
            return PointSet._trusted(pts[keep])

        kept: list[np.ndarray] = []
        for p in pts:
            if kept and bool(np.any(np.all(np.asarray(kept) >= p, axis=1))):
                continue
            kept.append(p)
        return PointSet._trusted(np.asarray(kept))

    def prune_ccs(self) -> "PointSet":
        """
        어떤 w ∈ 𝒲_D에서 선형 최적인 점만 남깁니다 (최소 CCS).

        D=1은 최댓값, D=2는 Pareto 가지치기 후 상부 볼록 껍질 스윕,
        D≥3은 가중치 공간 LP를 사용합니다. 공선(collinear) 내부 점은 제거됩니다.
        """
        front = self.prune_pareto()
        if len(front) <= 1:
            return front
        if self.dimension == 2:
            return PointSet._trusted(_upper_hull(front._points))

        from chmcts.app.domain.geometry.calculators import ConvexCoverageLP

        keep = ConvexCoverageLP(get_settings().CCS_LP_TOLERANCE).supported_mask(front._points)
        return PointSet._trusted(front._points[keep])

    def prune(self, mode: PruneMode) -> "PointSet":
        return self.prune_ccs() if mode == PruneMode.CCS else self.prune_pareto()

    def is_covered_by(self, other: "PointSet") -> bool:
        """모든 점이 other의 어떤 점에 약하게 지배되는지 확인합니다."""
        if self.is_empty():
            return True
        if other.is_empty():
            return False
        mine = self._points[:, None, :]
        theirs = other._points[None, :, :]
        return bool(np.all(np.any(np.all(theirs >= mine - _MERGE_TOLERANCE, axis=2), axis=1)))

    # ====================
    # Set arithmetic
    # ====================

    def set_sum(self, other: "PointSet") -> "PointSet":
        """𝒫 + 𝒫' = {p + p'} (가지치기 없음)."""
        if self.is_empty() or other.is_empty():
            raise ValidationException("set_sum requires nonempty point sets")
        self._require_dimension(other.dimension)
        sums = (self._points[:, None, :] + other._points[None, :, :]).reshape(-1, self.dimension)
        return PointSet._trusted(sums)

    __add__ = set_sum

    def affine(self, offset: Sequence[float] | Vector, scale: float) -> "PointSet":
        """
        b + k𝒫 = {b + kp}

        Raises:
            ValidationException: k < 0
        """
        if scale < 0:
            raise ValidationException(f"Affine scale must be nonnegative, got {scale}")
        b = np.asarray(offset, dtype=np.float64)
        self._require_dimension(b.shape[0])
        if scale == 0:
            return PointSet._trusted(b.reshape(1, -1))
        self._require_nonempty("affine")
        return PointSet._trusted(b + scale * self._points)

    @classmethod
    def expected_set(
        cls,
        terms: Sequence[tuple[float, "PointSet"]],
        offset: Sequence[float] | Vector,
        mode: PruneMode | None = PruneMode.CCS,
    ) -> "PointSet":
        """
        offset + Σᵢ pᵢ·𝒫ᵢ 를 계산하고 mode에 따라 가지치기합니다.

        중간 합마다 가지치기해도 결과는 같습니다 (선형 최적과 Pareto 최적 모두
        합에 대해 분해되므로). mode=None이면 가지치기하지 않습니다.

        Raises:
            ValidationException: 확률이 음수이거나 합이 1이 아닐 때
        """
        b = np.asarray(offset, dtype=np.float64)
        probabilities = [float(p) for p, _ in terms]
        if any(p < 0 for p in probabilities):
            raise ValidationException("Probabilities must be nonnegative")
        total = sum(probabilities)
        if abs(total - 1.0) > _PROBABILITY_SUM_TOLERANCE:
            raise ValidationException(f"Probabilities sum to {total}, expected 1")

        result = cls._trusted(b.reshape(1, -1))
        for probability, subset in terms:
            if probability == 0.0:
                continue
            result = result.set_sum(subset.affine(np.zeros_like(b), probability))
            if mode is not None:
                result = result.prune(mode)
        return result

    # ====================
    # Indicators
    # ====================

    def hypervolume(self, reference: Sequence[float] | Vector) -> float:
        """
        기준점 o 위에서 각 점이 만드는 상자 합집합의 넓이.

        o를 지배하지 않는 점은 잘린 상자(넓이 0일 수 있음)만 기여합니다.
        D=1은 선분 길이, D=2는 스윕, D≥3은 지원하지 않습니다.
        """
        o = np.asarray(reference, dtype=np.float64)
        self._require_dimension(o.shape[0])
        if self.is_empty():
            return 0.0
        if self.dimension == 1:
            return max(0.0, float(self._points[:, 0].max() - o[0]))
        if self.dimension > 2:
            raise ValidationException(
                f"Exact hypervolume is only supported for D <= 2 (got D={self.dimension})"
            )
        clipped = np.maximum(self._points, o)
        # 정규 순서: x 내림차순 → y가 누적 최대를 넘을 때만 새 띠가 생김
        area = 0.0
        best_y = o[1]
        for x, y in clipped:
            if y > best_y:
                area += (x - o[0]) * (y - best_y)
                best_y = y
        return float(area)


def _upper_hull(front: np.ndarray) -> np.ndarray:
    """
    Pareto 전선(x 내림차순)의 상부 오목 포락선 꼭짓점.

    x 오름차순으로 훑으며 시계 방향 회전이 아닌 점(공선 포함)을 제거합니다.
    """
    ascending = front[::-1]
    hull: list[np.ndarray] = []
    for p in ascending:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross >= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    return np.asarray(hull[::-1])


__all__ = [
    "DominanceRelation",
    "PruneMode",
    "WeightVector",
    "PointSet",
    "as_weights",
]
