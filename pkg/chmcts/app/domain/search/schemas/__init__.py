"""
Search Domain Schemas
"""

from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from chmcts.app.shared.types import CalculatorInput, CalculatorOutput, FormatterInput
from chmcts.app.domain.geometry.models import PointSet, PruneMode
from chmcts.app.domain.geometry.schemas import FrontSummary
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.schemas import ModelSourceRequest
from chmcts.app.domain.search.models import SearchBudget, SearchConfig, SearchResult, SearchTree
from chmcts.app.domain.selection.calculators import ActionSelection


class TreeSearchInput(CalculatorInput):
    """탐색 한 번에 필요한 모든 것 (난수 생성기 포함)."""

    model: Momdp
    strategy: ActionSelection
    budget: SearchBudget
    config: SearchConfig = Field(default_factory=SearchConfig)
    search_rng: np.random.Generator
    context_rng: np.random.Generator
    keep_trials: bool = False


class TreeSearchOutput(CalculatorOutput):
    result: SearchResult
    root_ccs: PointSet


class SearchRequest(BaseModel):
    """search 명령 요청"""

    source: ModelSourceRequest
    strategy: str = Field(default="zooming", description="선택 전략 이름")
    budget: SearchBudget
    prune: PruneMode = PruneMode.CCS
    labelling: bool = Field(default=True, description="수렴한 하위 트리 표시")
    exploration: float | None = Field(default=None, ge=0.0, description="UCB 탐험 상수 C")
    out: str | None = Field(default=None, description="결과 JSON 경로")
    snapshot: str | None = Field(default=None, description="트리 스냅샷 JSON 경로")
    front_csv: str | None = Field(default=None, description="루트 값 집합 CSV 경로")
    dump_balls: str | None = Field(default=None, description="루트 CZT 공 CSV 경로")
    compare_exact: bool = Field(default=False, description="CHVI 정답 CCS와 비교")


class SearchResponse(BaseModel):
    model: str
    strategy: str
    prune: PruneMode
    stats: dict[str, Any]
    front: FrontSummary
    matches_exact: bool | None = None
    out: str | None = None
    snapshot: str | None = None
    front_csv: str | None = None
    balls: str | None = None


class SnapshotInput(FormatterInput):
    tree: SearchTree
    model_name: str
    node_limit: int = Field(default=10_000, gt=0)


class SearchReportInput(FormatterInput):
    response: SearchResponse
