"""
Search Domain Calculators

CHMCTS: 노드마다 가지치기된 점 집합을 저장하고 CHVI 방식의 집합 방정식으로 백업하는
trial 기반 트리 탐색(THTS).

시행 하나의 흐름:
    1. 맥락 가중치 w_k ~ U(𝒲_D)
    2. selectAction / selectOutcome으로 새 노드 또는 종료 노드까지 하강
    3. 새 결정 노드는 {0}으로 초기화 (휴리스틱 없음)
    4. 방문 경로를 잎에서 루트로 백업 (변화가 없으면 중단)
    5. 방문한 결정 노드마다 전략 update (남은 누적 보상의 스칼라화 값)
"""

import time
from collections import deque
from typing import Sequence

import numpy as np

from chmcts.app.core.config import get_settings
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import BaseCalculator
from chmcts.app.shared.exceptions import BusinessLogicException, CalculatorException
from chmcts.app.shared.types import Vector
from chmcts.app.domain.geometry.calculators import SimplexSampler
from chmcts.app.domain.geometry.models import PointSet
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.chvi.calculators import chance_backup, decision_backup
from chmcts.app.domain.search.models import (
    ChanceNode,
    DecisionNode,
    SearchBudget,
    SearchConfig,
    SearchResult,
    SearchStats,
    SearchTree,
    TrialOutcome,
)
from chmcts.app.domain.search.schemas import TreeSearchInput, TreeSearchOutput
from chmcts.app.domain.selection.calculators import ActionSelection

logger = get_logger(__name__)


class TrialObserver:
    """
    시행 관찰자

    후회 측정(정책 평가는 시행 전 트리에서), offline 체크포인트 기록 등에 씁니다.
    기본 구현은 아무것도 하지 않습니다.
    """

    def on_trial_start(self, trial: int, weights: Vector, tree: SearchTree) -> None:
        pass

    def on_trial_end(self, outcome: TrialOutcome, tree: SearchTree, stats: SearchStats) -> None:
        pass


class ThtsEngine:
    """
    CHMCTS 시행 루프

    사용 예시:
        engine = ThtsEngine(model, StrategyFactory.create("zooming", model))
        result = engine.run_trials(SearchBudget(trials=1000), search_rng, context_rng)
        ccs = engine.extract_root_ccs(result.tree)
    """

    def __init__(
        self,
        model: Momdp,
        strategy: ActionSelection,
        config: SearchConfig | None = None,
    ):
        settings = get_settings()
        self.model = model
        self.strategy = strategy
        self.config = config or SearchConfig()
        self.mode = self.config.prune_mode
        self.node_limit = self.config.node_limit or settings.TREE_NODE_LIMIT
        self.progress_interval = (
            self.config.progress_interval or settings.PROGRESS_INTERVAL_SECONDS
        )
        self.sampler = SimplexSampler(model.num_objectives)
        self._zero = PointSet.zero(model.num_objectives)

    # ====================
    # Nodes
    # ====================

    def is_terminal(self, state: int, depth: int) -> bool:
        return depth >= self.model.horizon or self.model.is_terminal(state)

    def new_decision_node(self, state: int, depth: int) -> DecisionNode:
        node = DecisionNode(state, depth, self._zero, self.is_terminal(state, depth))
        if self.config.labelling and node.terminal:
            node.labelled = True
        return node

    def new_tree(self) -> SearchTree:
        root = self.new_decision_node(self.model.initial_state, 0)
        return SearchTree(root=root, prune_mode=self.mode)

    def allowed_actions(self, node: DecisionNode) -> list[int]:
        """라벨링이 켜져 있으면 기회 노드가 없거나 라벨이 없는 행동만."""
        actions = self.model.actions(node.state)
        if not self.config.labelling:
            return list(actions)
        return [
            a for a in actions if (child := node.children.get(a)) is None or not child.labelled
        ]

    def _positive_successors(self, state: int, action: int) -> list[tuple[int, float]]:
        return [(s2, p) for s2, p in self.model.successors(state, action) if p > 0.0]

    # ====================
    # Trial loop
    # ====================

    def run_trials(
        self,
        budget: SearchBudget,
        search_rng: np.random.Generator,
        context_rng: np.random.Generator,
        tree: SearchTree | None = None,
        observers: Sequence[TrialObserver] = (),
        keep_trials: bool = False,
    ) -> SearchResult:
        """
        예산이 끝나거나 루트에 라벨이 붙을 때까지 시행을 반복합니다.

        맥락 가중치는 context_rng에서만 뽑으므로 같은 시드의 전략들은 같은 w_k 열을 봅니다.

        Raises:
            BusinessLogicException: 예산이 0일 때
        """
        if budget.is_zero:
            raise BusinessLogicException(
                f"Search budget must be positive, got {budget.describe()}",
                details=budget.model_dump(),
            )

        tree = tree or self.new_tree()
        stats = SearchStats(nodes_created=tree.node_count)
        trials: list[TrialOutcome] = []
        started = time.perf_counter()
        last_report = started

        while True:
            elapsed = time.perf_counter() - started
            reason = self._stop_reason(budget, tree, stats, elapsed)
            if reason is not None:
                stats.stop_reason = reason
                break

            weights = self.sampler.sample(context_rng)
            for observer in observers:
                observer.on_trial_start(stats.trials_run, weights, tree)
            outcome = self.run_trial(tree, weights, search_rng, stats)
            if keep_trials:
                trials.append(outcome)
            for observer in observers:
                observer.on_trial_end(outcome, tree, stats)

            now = time.perf_counter()
            if now - last_report >= self.progress_interval:
                logger.info(
                    f"{self.strategy.name}: {stats.trials_run} trials, "
                    f"{stats.backups_performed} backups, {tree.node_count} nodes, "
                    f"|V(root)|={len(tree.root.value_set)}"
                )
                last_report = now

        stats.wall_time = time.perf_counter() - started
        logger.debug(
            f"Search on {self.model.name} stopped ({stats.stop_reason}) after "
            f"{stats.trials_run} trials / {stats.backups_performed} backups"
        )
        return SearchResult(tree=tree, stats=stats, trials=trials)

    def _stop_reason(
        self, budget: SearchBudget, tree: SearchTree, stats: SearchStats, elapsed: float
    ) -> str | None:
        if self.config.labelling and tree.root.labelled:
            return "solved"
        if budget.trials is not None and stats.trials_run >= budget.trials:
            return "budget"
        if budget.backups is not None and stats.backups_performed >= budget.backups:
            return "budget"
        if budget.seconds is not None and elapsed >= budget.seconds:
            return "budget"
        if tree.node_count >= self.node_limit:
            logger.warning(
                f"Tree reached the node limit ({self.node_limit}); stopping search",
                extra={"trials": stats.trials_run, "backups": stats.backups_performed},
            )
            return "node-limit"
        return None

    def run_trial(
        self,
        tree: SearchTree,
        weights: Vector,
        rng: np.random.Generator,
        stats: SearchStats,
    ) -> TrialOutcome:
        """
        시행 하나를 실행하고 트리를 갱신합니다.

        결정 노드의 visit_count는 도착 횟수입니다. 선택 전략의 N(s)는 자식 방문 수의 합이라
        시행 전 recommend와 시행 중 select가 같은 값을 봅니다.
        """
        model = self.model
        node = tree.root
        node.visit_count += 1
        path: list[DecisionNode | ChanceNode] = [node]
        steps: list[tuple[DecisionNode, int, Vector]] = []

        while not node.terminal:
            action = self.strategy.select(node, weights, rng, self.allowed_actions(node))
            chance = node.children.get(action)
            if chance is None:
                chance = ChanceNode(node.state, action, node.depth, self._zero)
                node.children[action] = chance
            chance.visit_count += 1

            child, created = self.select_outcome(chance, rng)
            reward = model.step_reward(node.state, action, child.state, node.depth)
            steps.append((node, action, reward))
            path.append(chance)
            path.append(child)
            if created:
                tree.node_count += 1
                stats.nodes_created += 1
                if child.labelled:
                    stats.labelled_count += 1
                break
            node = child

        backups = self.propagate_backups(path[::-1], stats)

        realized = np.zeros(model.num_objectives)
        for node_visited, action, reward in reversed(steps):
            realized = realized + reward
            self.strategy.update(node_visited, action, weights, float(weights @ realized))

        outcome = TrialOutcome(
            trial=stats.trials_run,
            weights=weights,
            realized_return=realized,
            path_length=len(steps),
            backups=backups,
        )
        stats.trials_run += 1
        return outcome

    # ====================
    # selectOutcome
    # ====================

    def select_outcome(
        self, node: ChanceNode, rng: np.random.Generator
    ) -> tuple[DecisionNode, bool]:
        """
        s' ~ T(s, a, ·)를 뽑고 자식이 없으면 만듭니다.

        라벨링이 켜져 있고 라벨이 붙은 자식이 있으면, 라벨이 없거나 아직 없는 후속 상태로
        제한해 (모델 확률을 재정규화해) 뽑습니다.

        Returns:
            (자식 결정 노드, 이번에 새로 만들었는지)
        """
        next_state: int | None = None
        if self.config.labelling and node.children:
            successors = self._positive_successors(node.state, node.action)
            open_successors = [
                (s2, p)
                for s2, p in successors
                if (child := node.children.get(s2)) is None or not child.labelled
            ]
            if open_successors and len(open_successors) < len(successors):
                next_state = self._sample_from(open_successors, rng)
        if next_state is None:
            next_state = self.model.sample_transition(node.state, node.action, rng)

        child = node.children.get(next_state)
        if child is not None:
            child.visit_count += 1
            return child, False
        child = self.new_decision_node(next_state, node.depth + 1)
        child.visit_count = 1
        node.children[next_state] = child
        return child, True

    @staticmethod
    def _sample_from(successors: list[tuple[int, float]], rng: np.random.Generator) -> int:
        if len(successors) == 1:
            return successors[0][0]
        cumulative = np.cumsum([p for _, p in successors])
        index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        return successors[min(index, len(successors) - 1)][0]

    # ====================
    # Backups
    # ====================

    def backup_decision(self, node: DecisionNode) -> bool:
        """𝒱(s) ← prune(∪ 확장된 자식의 𝒬). 바뀌었는지 반환."""
        if not node.children:
            raise CalculatorException(
                f"Decision node (s={node.state}, t={node.depth}) has no expanded child",
                details={"state": node.state, "depth": node.depth},
            )
        updated = decision_backup([child.q_set for child in node.children.values()], self.mode)
        changed = updated != node.value_set
        node.value_set = updated
        return changed

    def backup_chance(self, node: ChanceNode) -> bool:
        """
        𝒬(s, a) ← R(s, a) + Σ p̃(s')·𝒱(s')

        p̃는 확장된 자식들 위로 재정규화한 모델 확률입니다.
        """
        if not node.children:
            raise CalculatorException(
                f"Chance node (s={node.state}, a={node.action}, t={node.depth}) "
                "has no expanded child",
                details={"state": node.state, "action": node.action, "depth": node.depth},
            )
        expanded = [
            (s2, p)
            for s2, p in self.model.successors(node.state, node.action)
            if p > 0.0 and s2 in node.children
        ]
        total = sum(p for _, p in expanded)
        terms = [(s2, p / total, node.children[s2].value_set) for s2, p in expanded]
        updated = chance_backup(
            self.model, node.state, node.action, node.depth, terms, self.mode
        )
        changed = updated != node.q_set
        node.q_set = updated
        return changed

    def update_label(self, node: DecisionNode | ChanceNode) -> bool:
        """
        라벨 규칙을 적용하고 라벨이 새로 붙었는지 반환합니다.

        - 결정 노드: 종료 노드이거나, 모든 행동의 기회 노드가 있고 모두 라벨이 있음
        - 기회 노드: 확률이 양수인 모든 후속 상태가 확장되어 있고 모두 라벨이 있음
        """
        if not self.config.labelling or node.labelled:
            return False
        if isinstance(node, DecisionNode):
            done = node.terminal or (
                len(node.children) == len(self.model.actions(node.state))
                and all(child.labelled for child in node.children.values())
            )
        else:
            successors = self._positive_successors(node.state, node.action)
            done = all(
                (child := node.children.get(s2)) is not None and child.labelled
                for s2, _ in successors
            )
        node.labelled = done
        return done

    def propagate_backups(
        self,
        path: Sequence[DecisionNode | ChanceNode],
        stats: SearchStats | None = None,
    ) -> int:
        """
        잎 → 루트 순서의 경로를 백업하고 실행한 백업 수를 반환합니다.

        자식이 없는 노드(잎)는 건너뜁니다. 값도 라벨도 바뀌지 않은 첫 노드에서 멈춥니다.
        """
        count = 0
        for node in path:
            if not node.children:
                continue
            if isinstance(node, DecisionNode):
                changed = self.backup_decision(node)
            else:
                changed = self.backup_chance(node)
            count += 1
            labelled = self.update_label(node)
            if stats is not None and labelled and isinstance(node, DecisionNode):
                stats.labelled_count += 1
            if not changed and not labelled:
                break
        if stats is not None:
            stats.backups_performed += count
        return count

    def extract_root_ccs(self, tree: SearchTree) -> PointSet:
        """
        Raises:
            BusinessLogicException: 아직 시행이 없을 때
        """
        if tree.root.visit_count == 0 and not tree.root.terminal:
            raise BusinessLogicException("The search tree is empty; run at least one trial")
        return tree.root.value_set


class TreePolicyEvaluator:
    """
    시행 k가 따르는 정책의 정확한 기대 누적 보상

    트리의 결정 노드에서는 전략의 recommend 선택, 기회 노드에서는 모델 확률,
    트리 밖은 0으로 잘라냅니다 (시행이 새로 확장된 노드에서 끝나는 것과 같음).
    재귀 대신 명시적 큐를 써서 깊은 지평에서도 동작합니다.
    """

    def __init__(self, engine: ThtsEngine):
        self.engine = engine

    def evaluate(self, tree: SearchTree, weights: Vector) -> Vector:
        engine = self.engine
        model = engine.model
        total = np.zeros(model.num_objectives)
        queue: deque[tuple[DecisionNode, float]] = deque([(tree.root, 1.0)])
        while queue:
            node, reach = queue.popleft()
            if node.terminal:
                continue
            action = engine.strategy.recommend(node, weights, engine.allowed_actions(node))
            chance = node.children.get(action)
            for s2, p in model.successors(node.state, action):
                if p <= 0.0:
                    continue
                total += (reach * p) * model.step_reward(node.state, action, s2, node.depth)
                if chance is not None and (child := chance.children.get(s2)) is not None:
                    queue.append((child, reach * p))
        return total


class TreeSearchCalculator(BaseCalculator[TreeSearchInput, TreeSearchOutput]):
    """ThtsEngine 한 번 실행을 Calculator 경계로 감쌉니다."""

    async def calculate(self, input_data: TreeSearchInput) -> TreeSearchOutput:
        engine = ThtsEngine(input_data.model, input_data.strategy, input_data.config)
        result = engine.run_trials(
            input_data.budget,
            input_data.search_rng,
            input_data.context_rng,
            keep_trials=input_data.keep_trials,
        )
        return TreeSearchOutput(result=result, root_ccs=engine.extract_root_ccs(result.tree))


__all__ = [
    "ThtsEngine",
    "TrialObserver",
    "TreePolicyEvaluator",
    "TreeSearchCalculator",
]
