"""
Search Domain Models

THTS 트리의 노드와 탐색 예산, 통계를 정의합니다.
트리는 단일 작성자 객체입니다. 시행(trial) 도중이 아니면 스레드 간에 넘겨도 됩니다.
"""

from dataclasses import dataclass
from typing import Any

from pydantic import BaseModel, Field, model_validator

from chmcts.app.shared.types import Vector
from chmcts.app.domain.geometry.models import PointSet, PruneMode


class DecisionNode:
    """
    결정 노드 (s, t)

    value_set은 𝒱(s)의 근사이며 항상 가지치기된 상태입니다.
    bandit_state는 선택 전략이 필요할 때 만들어 둡니다 (CZT의 BallSet 등).
    """

    __slots__ = (
        "state",
        "depth",
        "value_set",
        "visit_count",
        "children",
        "labelled",
        "terminal",
        "bandit_state",
    )

    def __init__(self, state: int, depth: int, value_set: PointSet, terminal: bool):
        self.state = state
        self.depth = depth
        self.value_set = value_set
        self.visit_count = 0
        self.children: dict[int, ChanceNode] = {}
        self.labelled = False
        self.terminal = terminal
        self.bandit_state: Any = None

    @property
    def selections(self) -> int:
        """N(s): 이 노드에서 행동을 고른 횟수 (자식 기회 노드 방문 수의 합)."""
        return sum(child.visit_count for child in self.children.values())

    def child_visits(self, action: int) -> int:
        child = self.children.get(action)
        return 0 if child is None else child.visit_count

    def __repr__(self) -> str:
        return (
            f"DecisionNode(s={self.state}, t={self.depth}, N={self.visit_count}, "
            f"|V|={len(self.value_set)}, labelled={self.labelled})"
        )


class ChanceNode:
    """
    기회 노드 (s, a, t)

    children은 T(s, a, s') > 0 인 후속 상태만 키로 가집니다.
    """

    __slots__ = ("state", "action", "depth", "q_set", "visit_count", "children", "labelled")

    def __init__(self, state: int, action: int, depth: int, q_set: PointSet):
        self.state = state
        self.action = action
        self.depth = depth
        self.q_set = q_set
        self.visit_count = 0
        self.children: dict[int, DecisionNode] = {}
        self.labelled = False

    def __repr__(self) -> str:
        return (
            f"ChanceNode(s={self.state}, a={self.action}, t={self.depth}, "
            f"N={self.visit_count}, |Q|={len(self.q_set)}, labelled={self.labelled})"
        )


class SearchBudget(BaseModel):
    """
    탐색 예산: trials / backups / seconds 중 정확히 하나
    """

    trials: int | None = Field(default=None, ge=0, description="시행 수")
    backups: int | None = Field(default=None, ge=0, description="백업 수")
    seconds: float | None = Field(default=None, ge=0.0, description="벽시계 시간 (초)")

    @model_validator(mode="after")
    def check_exactly_one(self) -> "SearchBudget":
        given = [v for v in (self.trials, self.backups, self.seconds) if v is not None]
        if len(given) != 1:
            raise ValueError("exactly one of trials, backups or seconds must be given")
        return self

    @property
    def is_zero(self) -> bool:
        value = next(v for v in (self.trials, self.backups, self.seconds) if v is not None)
        return value <= 0

    def describe(self) -> str:
        if self.trials is not None:
            return f"{self.trials} trials"
        if self.backups is not None:
            return f"{self.backups} backups"
        return f"{self.seconds:g} s"


class SearchConfig(BaseModel):
    """
    탐색 실행 설정

    labelling: 수렴한 하위 트리에 표시를 달아 다시 탐색하지 않음 (오프라인 탐색용).
        온라인 후회 실행에서는 시행이 선택된 정책을 계속 따라야 하므로 끕니다.
    """

    prune_mode: PruneMode = PruneMode.CCS
    labelling: bool = True
    node_limit: int | None = Field(default=None, gt=0, description="None이면 TREE_NODE_LIMIT")
    progress_interval: float | None = Field(default=None, gt=0.0)


@dataclass
class SearchStats:
    """단조 비감소 카운터."""

    trials_run: int = 0
    backups_performed: int = 0
    nodes_created: int = 0
    labelled_count: int = 0
    wall_time: float = 0.0
    stop_reason: str = "budget"

    def as_dict(self) -> dict[str, Any]:
        return {
            "trials_run": self.trials_run,
            "backups_performed": self.backups_performed,
            "nodes_created": self.nodes_created,
            "labelled_count": self.labelled_count,
            "wall_time": round(self.wall_time, 6),
            "stop_reason": self.stop_reason,
        }


@dataclass(frozen=True)
class TrialOutcome:
    """
    시행 하나의 기록

    realized_return은 루트부터 새로 확장된 노드(또는 종료 상태)까지의 단계 보상 합입니다.
    """

    trial: int
    weights: Vector
    realized_return: Vector
    path_length: int
    backups: int


class SearchTree:
    """루트 결정 노드와 트리 전역 정보 (node_count는 결정 노드 수)."""

    def __init__(self, root: DecisionNode, prune_mode: PruneMode):
        self.root = root
        self.prune_mode = prune_mode
        self.node_count = 1

    @property
    def is_solved(self) -> bool:
        return self.root.labelled


class SearchResult:
    """run_trials 결과: 트리, 통계, (요청 시) 시행 기록."""

    def __init__(self, tree: SearchTree, stats: SearchStats, trials: list[TrialOutcome]):
        self.tree = tree
        self.stats = stats
        self.trials = trials


__all__ = [
    "DecisionNode",
    "ChanceNode",
    "SearchBudget",
    "SearchConfig",
    "SearchStats",
    "TrialOutcome",
    "SearchTree",
    "SearchResult",
]
