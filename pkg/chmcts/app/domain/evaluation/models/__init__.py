"""
Evaluation Domain Models

시행 기록, 후회 곡선, offline 체크포인트, scale 비율 행을 정의합니다.
워커 프로세스 사이를 오가므로 모두 피클 가능한 Pydantic 모델입니다.
"""

from enum import Enum
from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, Field, field_validator


class ExperimentKind(str, Enum):
    REGRET = "regret"
    OFFLINE = "offline"
    SCALE = "scale"


class RegretEstimator(str, Enum):
    """
    시행별 LCR 추정 방식

    - realized: 시행에서 실제로 받은 누적 보상 (싸고 기댓값이 같음)
    - exact: 시행 전 트리에서 따르는 정책의 정확한 기대 가치
    """

    REALIZED = "realized"
    EXACT = "exact"


class TrialRecord(BaseModel):
    """시행 k 하나의 기록 (값은 모델 단위)."""

    trial: int = Field(..., ge=0)
    weights: list[float]
    realized_return: list[float]
    value_estimate: float = Field(..., description="선택된 정책의 스칼라화 가치 추정")
    regret: float = Field(..., description="시행별 LCR 추정")
    pareto_gap: float = Field(default=0.0, ge=0.0)

    @field_validator("weights")
    @classmethod
    def check_weights(cls, v: list[float]) -> list[float]:
        if not v or any(x < 0.0 for x in v) or abs(sum(v) - 1.0) > 1e-9:
            raise ValueError("weights must be a nonnegative vector summing to 1")
        return v


class RegretCurve(BaseModel):
    """
    전략 하나, 반복 하나의 후회 곡선

    per_trial은 잘라내지 않은 시행별 후회입니다. realized 추정에서는 음수도 나올 수 있어
    누적 곡선이 국소적으로 감소할 수 있습니다.
    """

    strategy: str
    replication: int = Field(..., ge=0)
    estimator: RegretEstimator
    context_w0: list[float] = Field(default_factory=list)
    per_trial: list[float] = Field(default_factory=list)
    pareto_gaps: list[float] = Field(default_factory=list)
    stats: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_records(
        cls,
        strategy: str,
        replication: int,
        estimator: RegretEstimator,
        records: Sequence[TrialRecord],
        stats: dict[str, Any] | None = None,
    ) -> "RegretCurve":
        """
        Raises:
            ValueError: 시행 번호가 0, 1, 2, ... 순서가 아닐 때
        """
        for expected, record in enumerate(records):
            if record.trial != expected:
                raise ValueError(f"trial indices must increase by one (got {record.trial})")
        return cls(
            strategy=strategy,
            replication=replication,
            estimator=estimator,
            context_w0=[r.weights[0] for r in records],
            per_trial=[r.regret for r in records],
            pareto_gaps=[r.pareto_gap for r in records],
            stats=stats or {},
        )

    @property
    def trials(self) -> int:
        return len(self.per_trial)

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(np.asarray(self.per_trial, dtype=np.float64))

    @property
    def final_regret(self) -> float:
        return float(self.cumulative[-1]) if self.per_trial else 0.0

    @property
    def pareto_regret(self) -> float:
        return float(np.sum(self.pareto_gaps)) if self.pareto_gaps else 0.0

    def decile_means(self) -> tuple[float, float]:
        """(처음 10% 시행의 평균 시행별 후회, 마지막 10%의 평균). 시행이 없으면 (0, 0)."""
        n = self.trials
        if n == 0:
            return 0.0, 0.0
        size = max(1, n // 10)
        values = np.asarray(self.per_trial, dtype=np.float64)
        return float(values[:size].mean()), float(values[-size:].mean())


class OfflineCheckpoint(BaseModel):
    backups: int = Field(..., ge=0)
    hypervolume: float


class OfflineRun(BaseModel):
    """
    하이퍼볼륨-백업 곡선 하나

    체크포인트의 backups는 예정된 값이며, 그 값에 처음 도달한 시행이 끝난 뒤의 루트 HV를
    기록합니다. CHVI 행은 backups가 풀이의 실제 백업 수인 체크포인트 하나입니다.
    """

    strategy: str
    replication: int = Field(..., ge=0)
    checkpoints: list[OfflineCheckpoint] = Field(default_factory=list)
    stats: dict[str, Any] = Field(default_factory=dict)


class ScaleRow(BaseModel):
    """scale.csv 한 행: ratio = ehv(c, p) / hv(c, 0)."""

    columns: int = Field(..., ge=1)
    noise: float = Field(..., ge=0.0, le=1.0)
    strategy: str
    ratio: float
    replication: int = Field(..., ge=0)


CHVI_LABEL = "chvi"


__all__ = [
    "ExperimentKind",
    "RegretEstimator",
    "TrialRecord",
    "RegretCurve",
    "OfflineCheckpoint",
    "OfflineRun",
    "ScaleRow",
    "CHVI_LABEL",
]
