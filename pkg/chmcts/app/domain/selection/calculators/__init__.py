"""
Selection Domain Calculators

selectAction 전략 구현과 이름으로 전략을 만드는 팩토리입니다.

- ZoomingStrategy: 노드마다 독립적인 Contextual Zooming (context-aware)
- HypervolumeUCB: HV(𝒬(s, a), o)/N(s) + C√(ln N(s)/N(s, a)) (context-free)
- ChebychevUCB: −min_p max_i w_i|p_i − z_i| + 탐험 보너스 (context-aware)
- ParetoUCB1: ∪ₐ 𝒬(s, a)의 보너스 증강 Pareto 전선 위 균등 선택 (context-free)

모든 전략의 select는 노드 값 집합을 바꾸지 않고, update는 트리 구조를 바꾸지 않습니다.
"""

import math
from abc import ABC, abstractmethod
from typing import ClassVar, Sequence

import numpy as np

from chmcts.app.core.config import get_settings
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.exceptions import UsageException
from chmcts.app.shared.types import Vector
from chmcts.app.domain.geometry.calculators import Scalarization
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.search.models import DecisionNode
from chmcts.app.domain.selection.models import Ball, BallSet

logger = get_logger(__name__)

SCORE_TIE_TOLERANCE = 1e-12


def nondominated_mask(points: np.ndarray) -> np.ndarray:
    """어떤 다른 점에도 강하게 지배되지 않는 행의 마스크 (중복 점은 모두 남김)."""
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    ge = np.all(points[None, :, :] >= points[:, None, :], axis=2)
    gt = np.any(points[None, :, :] > points[:, None, :], axis=2)
    return ~np.any(ge & gt, axis=1)


class ActionSelection(ABC):
    """
    selectAction 전략 인터페이스

    - select: 시행 중 행동 선택 (rng가 필요한 전략만 사용)
    - recommend: 같은 상태에서 select가 할 결정적 선택 (정책 평가용)
    - update: 시행마다 방문한 결정 노드당 정확히 한 번, 스칼라화된 남은 누적 보상으로 호출
    """

    name: ClassVar[str]
    context_aware: ClassVar[bool]

    def __init__(self, model: Momdp):
        self.model = model

    def legal(self, node: DecisionNode, allowed: Sequence[int] | None) -> list[int]:
        actions = list(self.model.actions(node.state)) if allowed is None else list(allowed)
        if not actions:
            raise UsageException(f"No legal action at state {node.state}")
        return actions

    @abstractmethod
    def select(
        self,
        node: DecisionNode,
        weights: Vector,
        rng: np.random.Generator | None,
        allowed: Sequence[int] | None = None,
    ) -> int:
        raise NotImplementedError("Subclass must implement 'select' method")

    def recommend(
        self, node: DecisionNode, weights: Vector, allowed: Sequence[int] | None = None
    ) -> int:
        return self.select(node, weights, None, allowed)

    def update(
        self, node: DecisionNode, action: int, weights: Vector, scalarized_return: float
    ) -> None:
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}(model={self.model.name!r})"


class ZoomingStrategy(ActionSelection):
    """
    Contextual Zooming for Trees

    보상은 남은 누적 보상의 스칼라화 값을 return_bound_at(depth)로 나누고 U를 곱한
    [0, U] 값입니다. 범위를 벗어나면 잘라내고 노드마다 처음 한 번만 경고합니다.

    스칼라화된 남은 보상이 0 이상이라고 가정합니다 (보상 벡터 성분이 음수가 아닌 모델).
    음수 보상이 있는 모델은 모든 음수 반환값이 0으로 잘리므로, GDST처럼 음수가 없도록
    정규화한 계획용 사본을 넘겨야 합니다. 생성자는 음수 보상 성분이 있으면 경고합니다.
    """

    name = "zooming"
    context_aware = True

    def __init__(
        self,
        model: Momdp,
        bound: float | None = None,
        lipschitz: float | None = None,
    ):
        super().__init__(model)
        settings = get_settings()
        self.bound = settings.CZT_REWARD_BOUND if bound is None else float(bound)
        self.lipschitz = settings.CZT_LIPSCHITZ_SCALE if lipschitz is None else float(lipschitz)
        if model.has_negative_rewards:
            logger.warning(
                f"{model.name} has negative reward components; "
                "zooming clamps negative scalarized returns to 0"
            )

    def ball_set(self, node: DecisionNode) -> BallSet:
        if node.bandit_state is None:
            node.bandit_state = self._fresh(node)
        return node.bandit_state

    def _fresh(self, node: DecisionNode) -> BallSet:
        return BallSet(
            actions=self.model.actions(node.state),
            dimension=self.model.num_objectives,
            bound=self.bound,
            lipschitz=self.lipschitz,
        )

    def select(self, node, weights, rng, allowed=None) -> int:
        balls = self.ball_set(node)
        action, ball = balls.choose(weights, self.legal(node, allowed))
        balls.selected = ball
        return action

    def recommend(self, node, weights, allowed=None) -> int:
        balls = node.bandit_state if node.bandit_state is not None else self._fresh(node)
        action, _ = balls.choose(weights, self.legal(node, allowed))
        return action

    def normalize(self, node: DecisionNode, scalarized_return: float) -> float:
        reward = self.bound * scalarized_return / self.model.return_bound_at(node.depth)
        if 0.0 <= reward <= self.bound:
            return reward
        balls: BallSet = node.bandit_state
        clamped = min(max(reward, 0.0), self.bound)
        message = (
            f"CZT reward {reward:.6g} at (s={node.state}, t={node.depth}) "
            f"outside [0, {self.bound:g}], clamped to {clamped:g}"
        )
        if not balls.clamp_warned:
            logger.warning(message + "; check the model's return_bound")
            balls.clamp_warned = True
        else:
            logger.debug(message)
        return clamped

    def update(self, node, action, weights, scalarized_return) -> None:
        balls = self.ball_set(node)
        ball: Ball | None = balls.selected
        if ball is None:
            _, ball = balls.choose(weights, [action])
        balls.update(ball, action, weights, self.normalize(node, scalarized_return))
        balls.selected = None


class _CountingUCB(ActionSelection, ABC):
    """
    N(s, a) 기반 UCB 공통 부분

    아직 확장되지 않은 행동이 있으면 가장 작은 id부터 먼저 고릅니다.
    """

    def __init__(self, model: Momdp, exploration: float | None = None):
        super().__init__(model)
        self.exploration = (
            get_settings().EXPLORATION_CONSTANT if exploration is None else float(exploration)
        )

    @staticmethod
    def unexpanded(node: DecisionNode, actions: list[int]) -> int | None:
        for action in actions:
            if node.child_visits(action) == 0:
                return action
        return None

    def bonus(self, node: DecisionNode, action: int) -> float:
        total = max(node.selections, 1)
        return self.exploration * math.sqrt(math.log(total) / node.child_visits(action))


class _ScoredUCB(_CountingUCB, ABC):
    """argmax_a ζ(𝒬(s, a); w) + C√(ln N(s)/N(s, a)), 동률이면 작은 행동 id."""

    @abstractmethod
    def score(self, node: DecisionNode, action: int, weights: Vector) -> float:
        raise NotImplementedError

    def select(self, node, weights, rng, allowed=None) -> int:
        actions = self.legal(node, allowed)
        fresh = self.unexpanded(node, actions)
        if fresh is not None:
            return fresh
        best_action, best_score = actions[0], -math.inf
        for action in actions:
            value = self.score(node, action, weights) + self.bonus(node, action)
            if value > best_score + SCORE_TIE_TOLERANCE:
                best_action, best_score = action, value
        return best_action


class HypervolumeUCB(_ScoredUCB):
    """ζ(𝒬(s, a)) = HV(𝒬(s, a), o) / N(s). 가중치를 보지 않습니다."""

    name = "hypervolume"
    context_aware = False

    def __init__(self, model: Momdp, exploration: float | None = None):
        if model.num_objectives > 2:
            raise UsageException(
                "The hypervolume strategy needs D <= 2 (exact hypervolume)",
                details={"dimension": model.num_objectives},
            )
        super().__init__(model, exploration)
        self.reference = model.hypervolume_reference

    def score(self, node, action, weights) -> float:
        volume = node.children[action].q_set.hypervolume(self.reference)
        return volume / max(node.selections, 1)


class ChebychevUCB(_ScoredUCB):
    """
    ζ(𝒬(s, a); w) = −min_p max_i w_i |p_i − z_i|

    z는 모델 메타데이터의 utopian_point. 없으면 노드 자식 집합들의 성분별 최댓값을 씁니다.
    """

    name = "chebychev"
    context_aware = True

    def __init__(self, model: Momdp, exploration: float | None = None):
        super().__init__(model, exploration)
        self.utopian = (
            None
            if model.utopian_point is None
            else np.asarray(model.utopian_point, dtype=np.float64)
        )
        if self.utopian is None:
            logger.info(f"No utopian point for {model.name}; using per-node ideal points")

    def utopian_for(self, node: DecisionNode) -> Vector:
        if self.utopian is not None:
            return self.utopian
        stacked = np.vstack([child.q_set.points for child in node.children.values()])
        return stacked.max(axis=0)

    def score(self, node, action, weights) -> float:
        z = self.utopian_for(node)
        return -Scalarization.chebychev(node.children[action].q_set, weights, z)


class ParetoUCB1(_CountingUCB):
    """
    ∪ₐ 𝒬(s, a) 위의 ParetoUCB1

    각 점에 √(2 ln(N(s)·(D·|A*|)^{1/4}) / N(s, a))를 모든 성분에 더한 뒤 Pareto 전선을
    구하고, 전선 점을 가진 행동 중 하나를 균등하게 고릅니다. |A*|는 증강 전 전선을
    가진 행동 수 (최소 1). rng가 없으면 (recommend) 가장 작은 행동 id.
    """

    name = "pareto-ucb"
    context_aware = False

    def owners(self, node: DecisionNode, actions: list[int]) -> list[int]:
        dimension = self.model.num_objectives
        blocks = [node.children[a].q_set.points for a in actions]
        labels = np.concatenate([np.full(b.shape[0], a) for a, b in zip(actions, blocks)])
        stacked = np.vstack(blocks)
        optimal = max(1, len(set(labels[nondominated_mask(stacked)].tolist())))

        total = max(node.selections, 1)
        log_term = math.log(total * (dimension * optimal) ** 0.25)
        augmented = np.vstack(
            [
                block + math.sqrt(2.0 * max(log_term, 0.0) / node.child_visits(a))
                for a, block in zip(actions, blocks)
            ]
        )
        return sorted(set(labels[nondominated_mask(augmented)].tolist()))

    def select(self, node, weights, rng, allowed=None) -> int:
        actions = self.legal(node, allowed)
        fresh = self.unexpanded(node, actions)
        if fresh is not None:
            return fresh
        owners = self.owners(node, actions)
        if rng is None or len(owners) == 1:
            return int(owners[0])
        return int(owners[int(rng.integers(len(owners)))])


class StrategyFactory:
    """
    --strategy 이름으로 전략을 만듭니다.

    사용 예시:
        strategy = StrategyFactory.create("zooming", model)
    """

    STRATEGIES: ClassVar[dict[str, type[ActionSelection]]] = {
        ZoomingStrategy.name: ZoomingStrategy,
        HypervolumeUCB.name: HypervolumeUCB,
        ChebychevUCB.name: ChebychevUCB,
        ParetoUCB1.name: ParetoUCB1,
    }

    @classmethod
    def names(cls) -> list[str]:
        return list(cls.STRATEGIES)

    @classmethod
    def create(
        cls, name: str, model: Momdp, exploration: float | None = None
    ) -> ActionSelection:
        """
        Raises:
            UsageException: 알 수 없는 전략 이름
        """
        strategy_cls = cls.STRATEGIES.get(name)
        if strategy_cls is None:
            raise UsageException(
                f"Unknown strategy '{name}'; choose one of {', '.join(cls.STRATEGIES)}",
                details={"strategy": name},
            )
        if issubclass(strategy_cls, _CountingUCB):
            return strategy_cls(model, exploration=exploration)
        return strategy_cls(model)


__all__ = [
    "ActionSelection",
    "ZoomingStrategy",
    "HypervolumeUCB",
    "ChebychevUCB",
    "ParetoUCB1",
    "StrategyFactory",
    "nondominated_mask",
]
