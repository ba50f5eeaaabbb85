"""
CHVI Domain Models

시각 인덱스 가치 표 𝒱(s, t)와 선택적 𝒬(s, a, t) 표를 담는 풀이 결과입니다.
"""

from chmcts.app.shared.exceptions import ValidationException
from chmcts.app.domain.geometry.models import PointSet, PruneMode
from chmcts.app.domain.momdp.models import Momdp


class ChviSolution:
    """
    CHVI 풀이 결과

    - value_sets: (s, t) → 가지치기된 점 집합 (도달 가능한 비종료 상태만 저장)
    - q_sets: (s, a, t) → 점 집합 (keep_q_sets일 때만)
    - backup_count: 𝒬 재계산 + 𝒱 재계산 횟수

    𝒱(s, H)와 종료 상태의 𝒱는 저장하지 않고 {0}으로 응답합니다.
    """

    def __init__(
        self,
        model: Momdp,
        prune_mode: PruneMode,
        value_sets: dict[tuple[int, int], PointSet],
        q_sets: dict[tuple[int, int, int], PointSet] | None,
        backup_count: int,
        root: PointSet,
        tables_kept: bool,
    ):
        self.model = model
        self.prune_mode = prune_mode
        self.value_sets = value_sets
        self.q_sets = q_sets
        self.backup_count = backup_count
        self.root = root
        self.tables_kept = tables_kept
        self._zero = PointSet.zero(model.num_objectives)

    def value(self, state: int, timestep: int) -> PointSet:
        """
        Raises:
            ValidationException: 풀이되지 않은 (s, t)를 조회할 때
        """
        if timestep >= self.model.horizon or self.model.is_terminal(state):
            return self._zero
        if timestep == 0 and state == self.model.initial_state:
            return self.root
        found = self.value_sets.get((state, timestep))
        if found is None:
            raise ValidationException(
                f"State {state} at t={timestep} was not solved "
                + ("(unreachable)" if self.tables_kept else "(tables were not kept)"),
                details={"state": state, "timestep": timestep},
            )
        return found

    def q_set(self, state: int, action: int, timestep: int) -> PointSet | None:
        if self.q_sets is None:
            return None
        return self.q_sets.get((state, action, timestep))

    def __repr__(self) -> str:
        return (
            f"ChviSolution(model={self.model.name!r}, prune={self.prune_mode.value}, "
            f"backups={self.backup_count}, root_size={len(self.root)})"
        )


__all__ = ["ChviSolution"]
