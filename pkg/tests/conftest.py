"""
Pytest 설정 및 공통 Fixture

모든 테스트에서 사용할 수 있는 fixture를 정의합니다.
"""

import numpy as np
import pytest

from chmcts.app.core.context import RunContext
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.providers import FixtureProvider


# ====================
# 모델 Fixtures
# ====================

def load_fixture(name: str) -> Momdp:
    """체크인된 fixture 모델을 동기적으로 읽습니다."""
    provider = FixtureProvider()
    path = provider.path_of(name)
    return provider.build(provider.read_json(path), str(path))


@pytest.fixture
def example1() -> Momdp:
    """
    두 단계 예제 모델 (S=6, A=3, H=2)

    정답 CCS는 {(0, 6), (6, 0)} 입니다.
    """
    return load_fixture("example1")


@pytest.fixture
def theorem1() -> Momdp:
    """
    두 팔 밴딧 (보상 (1, 0)과 (0, 1), 기준점 원점)

    두 팔 모두 단독 하이퍼볼륨이 0입니다.
    """
    return load_fixture("theorem1")


@pytest.fixture
def small_gdst_config() -> GdstConfig:
    """빠른 테스트용 작은 GDST 설정 (c=3, 결정적, 짧은 지평)"""
    return GdstConfig(columns=3, noise=0.0, seed=0, horizon=12)


# ====================
# 실행 컨텍스트 Fixtures
# ====================

@pytest.fixture
def run_context(tmp_path) -> RunContext:
    """
    테스트용 실행 컨텍스트

    결과 파일과 manifest는 pytest 임시 디렉토리에 씁니다.
    """
    return RunContext.create("test", seed=7, workers=1, out_dir=tmp_path)


@pytest.fixture
def rng() -> np.random.Generator:
    """고정 시드 난수 생성기"""
    return np.random.default_rng(12345)


# ====================
# Markers
# ====================

# pyproject.toml에 정의된 마커들을 사용할 수 있습니다:
# - @pytest.mark.unit: 단위 테스트
# - @pytest.mark.integration: 통합 테스트
# - @pytest.mark.slow: 느린 테스트
