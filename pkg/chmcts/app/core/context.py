"""
실행 컨텍스트

명령 하나의 실행 단위 정보(run id, 마스터 시드, 워커 수, 출력 경로)와
마스터 시드에서 파생되는 난수 스트림을 정의합니다.
"""

import os
import uuid
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Any

import numpy as np

from chmcts.app.core.config import get_settings


class StreamPurpose(IntEnum):
    """
    난수 스트림 용도

    spawn_key의 두 번째 성분입니다. 값을 바꾸면 과거 결과를 재현할 수 없으므로 고정합니다.
    """

    CONTEXTS = 0
    SEARCH = 1
    SIMULATION = 2
    GENERATOR = 3


class SeedStreams:
    """
    카운터 기반 시드 분할

    스트림 (replication, purpose)는 SeedSequence(master, spawn_key=(replication, purpose))로
    만들어집니다. 키가 인덱스이므로 replication을 늘려도 기존 스트림은 바뀌지 않고,
    전략들은 같은 replication의 CONTEXTS 스트림을 공유합니다 (common random numbers).
    """

    def __init__(self, master_seed: int):
        if master_seed < 0:
            raise ValueError("master seed must be nonnegative")
        self.master_seed = int(master_seed)

    def sequence(self, replication: int, purpose: StreamPurpose) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(int(replication), int(purpose)),
        )

    def generator(self, replication: int, purpose: StreamPurpose) -> np.random.Generator:
        return np.random.default_rng(self.sequence(replication, purpose))

    def derived_seed(self, replication: int, purpose: StreamPurpose) -> int:
        """manifest 기록용 32비트 파생 시드."""
        return int(self.sequence(replication, purpose).generate_state(1)[0])

    def describe(self, replications: int) -> list[dict[str, Any]]:
        return [
            {
                "replication": r,
                "spawn_key": [r, int(purpose)],
                "purpose": purpose.name.lower(),
                "derived_seed": self.derived_seed(r, purpose),
            }
            for r in range(replications)
            for purpose in (StreamPurpose.CONTEXTS, StreamPurpose.SEARCH)
        ]


@dataclass
class RunContext:
    """
    명령 실행 컨텍스트

    서비스 생성자에 주입되며, 로그의 run_id와 manifest의 근거가 됩니다.
    """

    command: str
    master_seed: int
    workers: int
    out_dir: Path
    run_id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    resolved: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        command: str,
        seed: int | None = None,
        workers: int | None = None,
        out_dir: str | Path | None = None,
    ) -> "RunContext":
        settings = get_settings()
        resolved_workers = settings.DEFAULT_WORKERS if workers is None else workers
        if resolved_workers <= 0:
            resolved_workers = os.cpu_count() or 1
        return cls(
            command=command,
            master_seed=settings.DEFAULT_SEED if seed is None else int(seed),
            workers=resolved_workers,
            out_dir=Path(out_dir if out_dir is not None else settings.OUT_DIR),
        )

    @property
    def streams(self) -> SeedStreams:
        return SeedStreams(self.master_seed)

    def record(self, **values: Any) -> None:
        """manifest에 남길 해석된 설정값을 추가합니다."""
        self.resolved.update(values)
