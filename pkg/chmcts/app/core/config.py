"""
플래너 설정 관리
Pydantic Settings를 사용한 타입 안전한 환경 변수 관리
"""

import math
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    플래너 전역 설정

    환경 변수 또는 .env 파일에서 로드됩니다.
    CLI 플래그가 주어지면 실행 단위로 덮어쓰며, 최종 값은 run manifest에 기록됩니다.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ====================
    # Application Settings
    # ====================
    APP_NAME: str = Field(
        default="CHMCTS Planner",
        description="애플리케이션 이름"
    )
    APP_VERSION: str = Field(
        default="0.1.0",
        description="애플리케이션 버전"
    )
    DEBUG: bool = Field(
        default=False,
        description="디버그 모드 (traceback에 지역 변수 표시)"
    )
    ENVIRONMENT: str = Field(
        default="development",
        description="실행 환경 (development, ci, production)"
    )

    # ====================
    # Logging Settings
    # ====================
    LOG_LEVEL: str = Field(
        default="INFO",
        description="로그 레벨 (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )
    LOG_FORMAT: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="로그 포맷 문자열"
    )
    PROGRESS_INTERVAL_SECONDS: float = Field(
        default=10.0,
        description="긴 탐색/실험의 진행 상황 로그 간격 (초)",
        gt=0.0,
    )

    # ====================
    # Run Settings
    # ====================
    DEFAULT_SEED: int = Field(
        default=0,
        description="--seed 미지정 시 사용하는 마스터 시드",
        ge=0,
    )
    DEFAULT_WORKERS: int = Field(
        default=0,
        description="워커 프로세스 수 (0이면 사용 가능한 CPU 수)",
        ge=0,
    )
    OUT_DIR: str = Field(
        default="results",
        description="기본 출력 디렉토리"
    )

    # ====================
    # Geometry Settings
    # ====================
    MERGE_TOLERANCE: float = Field(
        default=1e-12,
        description="성분별 차이가 이 값 이하이면 같은 점으로 병합"
    )
    CCS_LP_TOLERANCE: float = Field(
        default=1e-12,
        description="D ≥ 3 볼록 가지치기 LP에서 점을 유지하기 위한 최소 여유값"
    )

    # ====================
    # Search Settings
    # ====================
    EXPLORATION_CONSTANT: float = Field(
        default=math.sqrt(2.0),
        description="Hypervolume-UCB / Chebychev-UCB 탐험 상수 C",
        ge=0.0,
    )
    CZT_REWARD_BOUND: float = Field(
        default=1.0,
        description="정규화된 보상 단위의 U",
        gt=0.0,
    )
    CZT_LIPSCHITZ_SCALE: float = Field(
        default=1.0,
        description="정규화된 보상 단위의 C_s(a) (0 ≤ C_s ≤ 2U)",
        ge=0.0,
    )
    TREE_NODE_LIMIT: int = Field(
        default=2_000_000,
        description="탐색 트리 하나의 최대 결정 노드 수",
        gt=0,
    )
    SNAPSHOT_NODE_LIMIT: int = Field(
        default=10_000,
        description="트리 스냅샷 내보내기 노드 상한",
        gt=0,
    )

    # ====================
    # Evaluation Settings
    # ====================
    EXACT_ESTIMATOR_MAX_TABLE: int = Field(
        default=1_000_000,
        description="정답 CCS 및 exact LCR 추정을 허용하는 |S|·H 상한",
        gt=0,
    )
    CHVI_MAX_BACKUPS: int = Field(
        default=2_000_000,
        description="offline / scale 실험에서 CHVI 행을 계산하는 백업 수 상한",
        gt=0,
    )
    CHECKPOINT_COUNT: int = Field(
        default=50,
        description="offline 실험 실행당 하이퍼볼륨 기록 지점 수",
        gt=0,
    )

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """로그 레벨 이름을 대문자로 통일합니다."""
        return str(v).upper()

    @field_validator("CZT_LIPSCHITZ_SCALE")
    @classmethod
    def check_lipschitz_scale(cls, v: float, info) -> float:
        bound = info.data.get("CZT_REWARD_BOUND", 1.0)
        if v > 2.0 * bound:
            raise ValueError("CZT_LIPSCHITZ_SCALE must satisfy 0 <= C_s <= 2U")
        return v


@lru_cache()
def get_settings() -> Settings:
    """
    설정 인스턴스를 반환합니다.

    @lru_cache 데코레이터를 통해 싱글톤 패턴을 구현합니다.

    Returns:
        Settings: 플래너 설정 인스턴스
    """
    return Settings()


# 전역 설정 인스턴스
settings = get_settings()
