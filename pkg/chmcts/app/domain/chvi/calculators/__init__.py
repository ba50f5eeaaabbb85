"""
CHVI Domain Calculators

- ChviSolver: 시각 H−1 … 0 역방향 귀납으로 𝒱(s, t)를 계산
- PolicyExtractor: 가중치 w에 대한 결정적 정책 추출
"""

import time

import numpy as np

from chmcts.app.core.config import get_settings
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import BaseCalculator
from chmcts.app.shared.exceptions import BusinessLogicException
from chmcts.app.domain.geometry.calculators import Scalarization
from chmcts.app.domain.geometry.models import PointSet, PruneMode, WeightVector
from chmcts.app.domain.momdp.models import DeterministicPolicy, Momdp
from chmcts.app.domain.chvi.models import ChviSolution
from chmcts.app.domain.chvi.schemas import ChviInput, ChviOutput

logger = get_logger(__name__)

TIE_TOLERANCE = 1e-12


def chance_backup(
    model: Momdp,
    state: int,
    action: int,
    timestep: int,
    successor_values: list[tuple[int, float, PointSet]],
    mode: PruneMode,
) -> PointSet:
    """
    𝒬(s, a) = E[R(s, a) + 𝒱(s')] 를 주어진 후속 집합으로 계산합니다.

    successor_values의 확률 합은 1이어야 합니다.
    도착 보상과 종료 보너스는 해당 후속 집합을 평행이동해 반영합니다.
    트리 탐색의 부분 확장 백업도 이 함수를 (재정규화된 확률로) 사용합니다.
    """
    terms: list[tuple[float, PointSet]] = []
    for next_state, probability, values in successor_values:
        bonus = model.arrival_bonus(next_state, timestep)
        terms.append((probability, values if bonus is None else values.affine(bonus, 1.0)))
    return PointSet.expected_set(terms, model.reward(state, action), mode)


def decision_backup(q_sets: list[PointSet], mode: PruneMode) -> PointSet:
    """𝒱(s) = prune(∪ₐ 𝒬(s, a))"""
    if len(q_sets) == 1:
        return q_sets[0].prune(mode)
    stacked = np.vstack([q.points for q in q_sets])
    return PointSet(stacked).prune(mode)


class ChviSolver(BaseCalculator[ChviInput, ChviOutput]):
    """
    유한 지평 CHVI

    도달 가능한 상태만 시각별로 풀어 backup_count가 실제 수행한 백업 수가 됩니다.
    같은 시각 층 안의 백업은 서로 독립입니다.
    """

    async def calculate(self, input_data: ChviInput) -> ChviOutput:
        return ChviOutput(
            solution=self.solve(
                input_data.model,
                mode=input_data.prune_mode,
                keep_tables=input_data.keep_tables,
                keep_q_sets=input_data.keep_q_sets,
                max_table=input_data.max_table,
            )
        )

    def solve(
        self,
        model: Momdp,
        mode: PruneMode = PruneMode.CCS,
        keep_tables: bool = True,
        keep_q_sets: bool = False,
        max_table: int | None = None,
    ) -> ChviSolution:
        """
        Raises:
            BusinessLogicException: |S|·H가 max_table을 넘을 때
        """
        table_size = model.num_states * model.horizon
        if max_table is not None and table_size > max_table:
            raise BusinessLogicException(
                f"Ground truth for '{model.name}' needs |S|*H = {table_size} table entries "
                f"(limit {max_table}); reduce the number of columns or the horizon",
                details={"table_size": table_size, "limit": max_table},
            )

        settings = get_settings()
        zero = PointSet.zero(model.num_objectives)
        layers = model.reachable_states
        value_sets: dict[tuple[int, int], PointSet] = {}
        q_sets: dict[tuple[int, int, int], PointSet] | None = {} if keep_q_sets else None
        backups = 0
        started = time.perf_counter()
        last_report = started

        def lookup(state: int, timestep: int) -> PointSet:
            if timestep >= model.horizon or model.is_terminal(state):
                return zero
            return value_sets[(state, timestep)]

        for t in range(model.horizon - 1, -1, -1):
            for state in layers[t].tolist():
                if model.is_terminal(state):
                    continue
                action_sets: list[PointSet] = []
                for action in range(model.num_actions):
                    successors = [
                        (s2, p, lookup(s2, t + 1))
                        for s2, p in model.successors(state, action)
                        if p > 0.0
                    ]
                    q = chance_backup(model, state, action, t, successors, mode)
                    backups += 1
                    action_sets.append(q)
                    if q_sets is not None:
                        q_sets[(state, action, t)] = q
                value_sets[(state, t)] = decision_backup(action_sets, mode)
                backups += 1

            if not keep_tables and t + 1 < model.horizon:
                for state in layers[t + 1].tolist():
                    value_sets.pop((state, t + 1), None)

            now = time.perf_counter()
            if now - last_report >= settings.PROGRESS_INTERVAL_SECONDS:
                logger.info(
                    f"CHVI t={t} ({model.horizon - t}/{model.horizon} layers, {backups} backups)"
                )
                last_report = now

        root = lookup(model.initial_state, 0) if model.horizon > 0 else zero
        logger.debug(
            f"CHVI solved {model.name}: {backups} backups, |CCS|={len(root)} "
            f"({time.perf_counter() - started:.3f}s)"
        )
        return ChviSolution(
            model=model,
            prune_mode=mode,
            value_sets=value_sets,
            q_sets=q_sets,
            backup_count=backups,
            root=root,
            tables_kept=keep_tables,
        )

    @staticmethod
    def max_backups(model: Momdp) -> int:
        """backup_count의 상한 |S|·H·(|A| + 1). 도달 가능성 계산 없이 실행 가능 여부를 판단합니다."""
        return model.num_states * model.horizon * (model.num_actions + 1)

    def true_ccs(self, model: Momdp, max_table: int | None = None) -> PointSet:
        """정답 CCS 𝒱(s̄, 0). 표는 층마다 버립니다."""
        return self.solve(model, PruneMode.CCS, keep_tables=False, max_table=max_table).root


class PolicyExtractor:
    """
    가중치 w에서 선형 최적인 결정적 정책 추출

    각 (s, t)에서 max_scalarized(𝒬(s, a, t), w)가 가장 큰 행동, 동률이면 가장 작은 행동 id.
    𝒬 표가 없으면 𝒱 표에서 다시 계산합니다.
    """

    def __init__(self, solution: ChviSolution):
        self.solution = solution

    def q_set(self, state: int, action: int, timestep: int) -> PointSet:
        stored = self.solution.q_set(state, action, timestep)
        if stored is not None:
            return stored
        model = self.solution.model
        successors = [
            (s2, p, self.solution.value(s2, timestep + 1))
            for s2, p in model.successors(state, action)
            if p > 0.0
        ]
        return chance_backup(model, state, action, timestep, successors, self.solution.prune_mode)

    def best_action(self, state: int, timestep: int, weights: np.ndarray) -> tuple[int, float]:
        best_action, best_value = 0, -np.inf
        for action in range(self.solution.model.num_actions):
            _, value = Scalarization.max_scalarized(self.q_set(state, action, timestep), weights)
            if value > best_value + TIE_TOLERANCE:
                best_action, best_value = action, value
        return best_action, float(best_value)

    def extract(self, weights: WeightVector) -> DeterministicPolicy:
        model = self.solution.model
        policy = DeterministicPolicy.empty(model.num_states, model.horizon)
        for t in range(model.horizon):
            for state in model.reachable_states[t].tolist():
                if model.is_terminal(state):
                    continue
                action, _ = self.best_action(state, t, weights.values)
                policy.assign(state, t, action)
        return policy


__all__ = ["ChviSolver", "PolicyExtractor", "chance_backup", "decision_backup"]
