"""
MOMDP Domain Models

유한 지평 다목적 MDP ⟨S, A, R, T, s̄, H⟩와 정책, 궤적을 정의합니다.
생성 후 불변이며 스레드/프로세스 간에 공유해도 안전합니다.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping

import numpy as np

from chmcts.app.shared.exceptions import BusinessLogicException, ValidationException
from chmcts.app.shared.types import Vector

StateAction = tuple[int, int]
Successors = tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class ModelViolation:
    """
    불변식 위반 하나

    state/action은 위반 위치 (전역 위반이면 None).
    """

    kind: str
    message: str
    state: int | None = None
    action: int | None = None

    def __str__(self) -> str:
        if self.state is None:
            return f"{self.kind}: {self.message}"
        where = f"(s={self.state}" + (f", a={self.action})" if self.action is not None else ")")
        return f"{self.kind} at {where}: {self.message}"


class Momdp:
    """
    유한 지평 MOMDP

    - rewards: (s, a) → D차원 보상 (없으면 영벡터)
    - transitions: (s, a) → ((s', p), ...) 희소 후속 상태 목록
    - terminals: 흡수 상태. 시뮬레이션은 여기서 멈춥니다
    - arrival_rewards: s' → 그 상태에 도착하는 전이에 더하는 보상 (보물 칸 등)
    - terminal_bonus: 시각 t에 종료 상태로 들어가는 전이에 bonus·(H−t−1)/H를 더함
    - reference_point / utopian_point / return_bound: 평가와 선택 전략용 메타데이터

    생성 후에는 속성을 바꾸지 않습니다 (cached_property 값이 그 전제를 따름).
    """

    def __init__(
        self,
        *,
        num_states: int,
        num_actions: int,
        num_objectives: int,
        horizon: int,
        initial_state: int,
        terminals: frozenset[int] | set[int],
        rewards: Mapping[StateAction, Vector],
        transitions: Mapping[StateAction, Successors],
        arrival_rewards: Mapping[int, Vector] | None = None,
        terminal_bonus: Vector | None = None,
        name: str = "model",
        reference_point: Vector | None = None,
        utopian_point: Vector | None = None,
        return_bound: float | None = None,
    ):
        self.num_states = num_states
        self.num_actions = num_actions
        self.num_objectives = num_objectives
        self.horizon = horizon
        self.initial_state = initial_state
        self.terminals = frozenset(terminals)
        self.rewards = dict(rewards)
        self.transitions = dict(transitions)
        self.arrival_rewards = dict(arrival_rewards or {})
        self.terminal_bonus = terminal_bonus
        self.name = name
        self.reference_point = reference_point
        self.utopian_point = utopian_point
        self.return_bound = return_bound

    def replace(self, **changes: object) -> "Momdp":
        """일부 필드만 바꾼 새 모델."""
        fields = {
            "num_states": self.num_states,
            "num_actions": self.num_actions,
            "num_objectives": self.num_objectives,
            "horizon": self.horizon,
            "initial_state": self.initial_state,
            "terminals": self.terminals,
            "rewards": self.rewards,
            "transitions": self.transitions,
            "arrival_rewards": self.arrival_rewards,
            "terminal_bonus": self.terminal_bonus,
            "name": self.name,
            "reference_point": self.reference_point,
            "utopian_point": self.utopian_point,
            "return_bound": self.return_bound,
        }
        fields.update(changes)
        return Momdp(**fields)  # type: ignore[arg-type]

    # ====================
    # Structure
    # ====================

    @property
    def dimension(self) -> int:
        return self.num_objectives

    def is_terminal(self, state: int) -> bool:
        return state in self.terminals

    def actions(self, state: int) -> range:
        """비종료 상태에서는 모든 행동이 합법입니다."""
        return range(0 if self.is_terminal(state) else self.num_actions)

    def successors(self, state: int, action: int) -> Successors:
        return self.transitions.get((state, action), ())

    def zero(self) -> Vector:
        return np.zeros(self.num_objectives)

    @cached_property
    def _zero_reward(self) -> Vector:
        vector = np.zeros(self.num_objectives)
        vector.setflags(write=False)
        return vector

    def reward(self, state: int, action: int) -> Vector:
        return self.rewards.get((state, action), self._zero_reward)

    def arrival_bonus(self, next_state: int, timestep: int) -> Vector | None:
        """
        시각 timestep의 전이로 next_state에 도착할 때 R(s, a)에 더해지는 보상.

        도착 보상과 (종료 상태라면) 남은 시간 비례 종료 보너스의 합. 둘 다 없으면 None.
        """
        arrival = self.arrival_rewards.get(next_state)
        if self.terminal_bonus is not None and next_state in self.terminals:
            remaining = (self.horizon - timestep - 1) / self.horizon
            bonus = self.terminal_bonus * remaining
            return bonus if arrival is None else arrival + bonus
        return arrival

    def step_reward(self, state: int, action: int, next_state: int, timestep: int) -> Vector:
        base = self.reward(state, action)
        bonus = self.arrival_bonus(next_state, timestep)
        return base if bonus is None else base + bonus

    @cached_property
    def max_reward_component(self) -> float:
        """한 단계에서 받을 수 있는 가장 큰 보상 성분 (도착 보상과 보너스 포함)."""
        best = 0.0
        for vector in self.rewards.values():
            best = max(best, float(np.max(vector)))
        if self.arrival_rewards:
            best += max(0.0, max(float(np.max(v)) for v in self.arrival_rewards.values()))
        if self.terminal_bonus is not None:
            best += max(0.0, float(np.max(self.terminal_bonus)))
        return best

    @cached_property
    def has_negative_rewards(self) -> bool:
        vectors = [*self.rewards.values(), *self.arrival_rewards.values()]
        if self.terminal_bonus is not None:
            vectors.append(self.terminal_bonus)
        return any(float(np.min(v)) < 0.0 for v in vectors)

    @property
    def hypervolume_reference(self) -> Vector:
        """하이퍼볼륨 기준점 o (메타데이터가 없으면 원점)."""
        if self.reference_point is not None:
            return np.asarray(self.reference_point, dtype=np.float64)
        return np.zeros(self.num_objectives)

    def return_bound_at(self, depth: int) -> float:
        """
        깊이 depth부터의 스칼라화 누적 보상 상한.

        메타데이터 return_bound가 있으면 그 값을, 없으면 (H − depth)·최대 보상 성분.
        """
        if self.return_bound is not None:
            return float(self.return_bound)
        bound = (self.horizon - depth) * self.max_reward_component
        return bound if bound > 0.0 else 1.0

    # ====================
    # Reachability
    # ====================

    @cached_property
    def reachable_states(self) -> tuple[np.ndarray, ...]:
        """
        시각 t = 0..H에 도달 가능한 상태 (정렬된 배열).

        종료 상태는 도달한 시각의 집합에는 포함되지만 더 확장하지 않습니다.
        """
        layers: list[np.ndarray] = []
        frontier = {self.initial_state}
        for _ in range(self.horizon + 1):
            layer = np.array(sorted(frontier), dtype=np.int64)
            layers.append(layer)
            following: set[int] = set()
            for s in layer.tolist():
                if self.is_terminal(s):
                    continue
                for a in range(self.num_actions):
                    following.update(s2 for s2, p in self.successors(s, a) if p > 0.0)
            frontier = following
        return tuple(layers)

    # ====================
    # Sampling
    # ====================

    @cached_property
    def _sampling_tables(self) -> dict[StateAction, tuple[np.ndarray, np.ndarray]]:
        tables: dict[StateAction, tuple[np.ndarray, np.ndarray]] = {}
        for key, successors in self.transitions.items():
            states = np.array([s2 for s2, _ in successors], dtype=np.int64)
            cumulative = np.cumsum([p for _, p in successors])
            tables[key] = (states, cumulative)
        return tables

    def sample_transition(self, state: int, action: int, rng: np.random.Generator) -> int:
        """
        s' ~ T(s, a, ·)

        Raises:
            BusinessLogicException: 종료 상태이거나 (s, a)에 전이가 없을 때
        """
        if self.is_terminal(state):
            raise BusinessLogicException(
                f"No transitions from terminal state {state}",
                details={"state": state, "action": action},
            )
        table = self._sampling_tables.get((state, action))
        if table is None:
            raise BusinessLogicException(
                f"No transitions defined for (s={state}, a={action})",
                details={"state": state, "action": action},
            )
        states, cumulative = table
        if states.shape[0] == 1:
            return int(states[0])
        index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        return int(states[min(index, states.shape[0] - 1)])

    def renormalized(self) -> "Momdp":
        """확률 합이 정확히 1이 되도록 한 번 정규화한 사본."""
        transitions = {}
        for key, successors in self.transitions.items():
            total = sum(p for _, p in successors)
            transitions[key] = tuple((s2, p / total) for s2, p in successors)
        return self.replace(transitions=transitions)

    def __repr__(self) -> str:
        return (
            f"Momdp(name={self.name!r}, S={self.num_states}, A={self.num_actions}, "
            f"D={self.num_objectives}, H={self.horizon})"
        )


class DeterministicPolicy:
    """
    시각 인덱스 결정적 정책 π(s, t)

    (S × H) 정수 표이며 −1은 정의되지 않은 항목입니다.
    """

    UNDEFINED = -1

    def __init__(self, table: np.ndarray):
        self.table = np.asarray(table, dtype=np.int64)

    @classmethod
    def empty(cls, num_states: int, horizon: int) -> "DeterministicPolicy":
        return cls(np.full((num_states, horizon), cls.UNDEFINED, dtype=np.int64))

    def action(self, state: int, timestep: int) -> int:
        """
        Raises:
            ValidationException: 정의되지 않은 (s, t)를 조회할 때
        """
        if not (0 <= timestep < self.table.shape[1]) or not (0 <= state < self.table.shape[0]):
            raise ValidationException(
                f"Policy undefined at (s={state}, t={timestep})",
                details={"state": state, "timestep": timestep},
            )
        value = int(self.table[state, timestep])
        if value == self.UNDEFINED:
            raise ValidationException(
                f"Policy undefined at (s={state}, t={timestep})",
                details={"state": state, "timestep": timestep},
            )
        return value

    def assign(self, state: int, timestep: int, action: int) -> None:
        self.table[state, timestep] = action

    def as_callback(self) -> Callable[[int, int, Vector], int]:
        """simulate에 넘길 수 있는 (s, t, w) → a 콜백."""
        return lambda state, timestep, _w: self.action(state, timestep)


@dataclass(frozen=True)
class TrajectoryStep:
    timestep: int
    state: int
    action: int
    reward: tuple[float, ...]
    next_state: int


@dataclass(frozen=True)
class Trajectory:
    """누적 보상은 단계 보상의 성분별 합입니다."""

    steps: tuple[TrajectoryStep, ...]
    cumulative_return: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TrajectoryStep]:
        return iter(self.steps)


# 탐험 정책 콜백: (state, timestep, weights) → action
ExplorationPolicy = Callable[[int, int, Vector], int]


__all__ = [
    "ModelViolation",
    "Momdp",
    "DeterministicPolicy",
    "TrajectoryStep",
    "Trajectory",
    "ExplorationPolicy",
    "StateAction",
    "Successors",
]
