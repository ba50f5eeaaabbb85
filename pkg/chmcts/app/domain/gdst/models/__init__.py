"""
GDST Domain Models

Generalised Deep Sea Treasure 인스턴스 설정과 생성 결과를 정의합니다.
"""

from enum import IntEnum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from chmcts.app.shared.types import Vector
from chmcts.app.domain.momdp.models import Momdp

MAX_TREASURE = 1000
MAX_INCREMENT = 3


class Direction(IntEnum):
    """행동 id = 이동 방향."""

    LEFT = 0
    RIGHT = 1
    UP = 2
    DOWN = 3

    @property
    def delta(self) -> tuple[int, int]:
        return {
            Direction.LEFT: (0, -1),
            Direction.RIGHT: (0, 1),
            Direction.UP: (-1, 0),
            Direction.DOWN: (1, 0),
        }[self]


class GdstConfig(BaseModel):
    """
    GDST(c, p) 생성 설정

    depth_increments / treasure_values를 주면 시드 대신 그 값을 사용합니다.
    horizon을 주지 않으면 H = 100·c.
    """

    columns: int = Field(..., ge=1, description="열 수 c")
    noise: float = Field(default=0.0, ge=0.0, le=1.0, description="해류에 휩쓸릴 확률 p")
    seed: int = Field(default=0, ge=0, description="생성 시드")
    depth_increments: list[int] | None = Field(
        default=None, description="열 경계마다의 깊이 증가량 (길이 c−1, 0..3)"
    )
    treasure_values: list[int] | None = Field(
        default=None, description="열별 보물 값 (길이 c, 강한 증가, 1..1000)"
    )
    horizon: int | None = Field(default=None, ge=1, description="지평 H (기본 100·c)")

    @field_validator("depth_increments")
    @classmethod
    def check_increments(cls, v: list[int] | None) -> list[int] | None:
        if v is not None and any(not 0 <= x <= MAX_INCREMENT for x in v):
            raise ValueError(f"depth increments must lie in 0..{MAX_INCREMENT}")
        return v

    @field_validator("treasure_values")
    @classmethod
    def check_treasures(cls, v: list[int] | None) -> list[int] | None:
        if v is None:
            return v
        if any(not 1 <= x <= MAX_TREASURE for x in v):
            raise ValueError(f"treasure values must lie in 1..{MAX_TREASURE}")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("treasure values must be strictly increasing left to right")
        return v

    @model_validator(mode="after")
    def check_lengths(self) -> "GdstConfig":
        if self.depth_increments is not None and len(self.depth_increments) != self.columns - 1:
            raise ValueError(f"depth_increments needs {self.columns - 1} entries")
        if self.treasure_values is not None and len(self.treasure_values) != self.columns:
            raise ValueError(f"treasure_values needs {self.columns} entries")
        if self.columns > MAX_TREASURE:
            raise ValueError(f"at most {MAX_TREASURE} columns fit strictly increasing treasures")
        return self

    @property
    def resolved_horizon(self) -> int:
        return self.horizon if self.horizon is not None else 100 * self.columns


class NormalizationMap:
    """
    목적별 아핀 사상 normalized = (raw − offset) / scale

    보물: scale = 최대 보물 값, offset = 0
    시간: raw 누적 −k → (H − k)/H, 즉 offset = −H, scale = H
    """

    def __init__(self, offsets: Vector, scales: Vector):
        self.offsets = np.asarray(offsets, dtype=np.float64)
        self.scales = np.asarray(scales, dtype=np.float64)

    def to_normalized(self, raw: Vector) -> Vector:
        return (np.asarray(raw, dtype=np.float64) - self.offsets) / self.scales

    def to_raw(self, normalized: Vector) -> Vector:
        return np.asarray(normalized, dtype=np.float64) * self.scales + self.offsets

    def as_dict(self) -> dict[str, list[float]]:
        return {"offsets": self.offsets.tolist(), "scales": self.scales.tolist()}


class TreasureCell(BaseModel):
    row: int
    column: int
    value: int


class GdstInstance:
    """
    생성된 GDST 인스턴스

    - raw_model: (v, −1) 보상의 원 단위 모델
    - model: [0, 1] 정규화 계획용 모델 (종료 보너스 인코딩)
    - floor: 열별 보물 깊이 (왼쪽에서 오른쪽으로 단조 비감소)
    """

    def __init__(
        self,
        config: GdstConfig,
        rows: int,
        floor: list[int],
        treasures: list[TreasureCell],
        raw_model: Momdp,
        model: Momdp,
        normalization: NormalizationMap,
    ):
        self.config = config
        self.rows = rows
        self.columns = config.columns
        self.floor = floor
        self.treasures = treasures
        self.raw_model = raw_model
        self.model = model
        self.normalization = normalization

    @property
    def horizon(self) -> int:
        return self.model.horizon

    @property
    def num_states(self) -> int:
        """격자 칸 수 rows·columns. 보물 칸이 흡수 종료 상태라 별도 done 상태는 없습니다."""
        return self.rows * self.columns

    @property
    def utopian_point(self) -> Vector:
        return np.asarray(self.model.utopian_point, dtype=np.float64)

    def state_of(self, row: int, column: int) -> int:
        return row * self.columns + column

    def cell_of(self, state: int) -> tuple[int, int]:
        return divmod(state, self.columns)

    def is_rock(self, row: int, column: int) -> bool:
        return row > self.floor[column]

    def __repr__(self) -> str:
        return (
            f"GdstInstance(c={self.columns}, p={self.config.noise}, seed={self.config.seed}, "
            f"rows={self.rows}, H={self.horizon})"
        )


__all__ = [
    "Direction",
    "GdstConfig",
    "NormalizationMap",
    "TreasureCell",
    "GdstInstance",
    "MAX_TREASURE",
]
