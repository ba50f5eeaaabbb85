"""
CHVI Domain Schemas
"""

from pydantic import BaseModel, Field

from chmcts.app.shared.types import CalculatorInput, CalculatorOutput, FormatterInput
from chmcts.app.domain.geometry.models import PruneMode
from chmcts.app.domain.geometry.schemas import FrontSummary
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.schemas import ModelSourceRequest
from chmcts.app.domain.chvi.models import ChviSolution


class ChviInput(CalculatorInput):
    model: Momdp
    prune_mode: PruneMode = PruneMode.CCS
    keep_tables: bool = Field(default=True, description="모든 시각의 𝒱 표 유지 (정책 추출에 필요)")
    keep_q_sets: bool = Field(default=False, description="𝒬 표 유지 (메모리 큼)")
    max_table: int | None = Field(default=None, description="|S|·H 상한, 넘으면 거부")


class ChviOutput(CalculatorOutput):
    solution: ChviSolution


class SolveRequest(BaseModel):
    """solve 명령 요청"""

    source: ModelSourceRequest
    prune: PruneMode = PruneMode.CCS
    out: str | None = Field(default=None, description="풀이 JSON 경로")
    front_csv: str | None = Field(default=None, description="루트 CCS CSV 경로 (한 행에 점 하나)")
    dump_tables: bool = Field(default=False, description="전체 𝒱/𝒬 표를 JSON에 포함")
    weights: list[float] | None = Field(default=None, description="정책을 추출해 평가할 가중치")


class PolicyReport(BaseModel):
    weights: list[float]
    scalarized_value: float
    policy_value: list[float]
    root_actions: list[int]


class SolveResponse(BaseModel):
    model: str
    prune: PruneMode
    backup_count: int
    front: FrontSummary
    policy: PolicyReport | None = None
    out: str | None = None
    front_csv: str | None = None


class SolutionFormatterInput(FormatterInput):
    solution: ChviSolution
    front: FrontSummary
    policy: PolicyReport | None = None
    include_tables: bool = False
