"""
GDST Domain Calculators

- GdstGenerator: GdstConfig → GdstInstance (원 단위 + 정규화 모델)
- ShortestPathOracle: p = 0 인스턴스의 BFS 최단 경로 전선
"""

from collections import deque

import numpy as np

from chmcts.app.core.context import SeedStreams, StreamPurpose
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import BaseCalculator
from chmcts.app.domain.geometry.models import PointSet
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.gdst.models import (
    MAX_TREASURE,
    Direction,
    GdstConfig,
    GdstInstance,
    NormalizationMap,
    TreasureCell,
)
from chmcts.app.domain.gdst.schemas import GenerateInput, GenerateOutput

logger = get_logger(__name__)


def _readonly(values) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    array.setflags(write=False)
    return array


class GdstGenerator(BaseCalculator[GenerateInput, GenerateOutput]):
    """
    GDST(c, p) 생성기

    규칙:
        - 시작 (0, 0), 첫 보물 깊이 1, 다음 열 깊이 = 이전 + U{0..3}
        - 보물 아래 칸은 암반. 격자 밖/암반으로의 이동은 제자리
        - 확률 p로 선택한 이동이 균등 무작위 방향으로 바뀜 (같은 결과는 병합)
        - 보물 칸은 종료 상태이며 도착할 때 보물 값을 받음
    같은 설정이면 같은 모델을 만듭니다.
    """

    async def calculate(self, input_data: GenerateInput) -> GenerateOutput:
        return GenerateOutput(instance=self.generate(input_data.config))

    def generate(self, config: GdstConfig) -> GdstInstance:
        rng = SeedStreams(config.seed).generator(0, StreamPurpose.GENERATOR)
        c = config.columns
        increments = (
            list(config.depth_increments)
            if config.depth_increments is not None
            else rng.integers(0, 4, size=c - 1).tolist()
        )
        floor = [1]
        for inc in increments:
            floor.append(floor[-1] + int(inc))
        values = (
            list(config.treasure_values)
            if config.treasure_values is not None
            else self.treasure_values(floor)
        )
        rows = floor[-1] + 1
        treasures = [TreasureCell(row=floor[j], column=j, value=values[j]) for j in range(c)]
        horizon = config.resolved_horizon

        transitions = self._transitions(rows, c, floor, config.noise)
        treasure_states = {t.row * c + t.column: t.value for t in treasures}
        terminals = frozenset(treasure_states)
        max_value = float(max(values))
        suffix = f"gdst-c{c}-p{config.noise:g}-s{config.seed}"

        step_cost = _readonly([0.0, -1.0])
        raw_rewards = {key: step_cost for key in transitions}
        raw_model = Momdp(
            num_states=rows * c,
            num_actions=len(Direction),
            num_objectives=2,
            horizon=horizon,
            initial_state=0,
            terminals=terminals,
            rewards=raw_rewards,
            transitions=transitions,
            arrival_rewards={s: _readonly([v, 0.0]) for s, v in treasure_states.items()},
            name=f"{suffix}-raw",
            reference_point=_readonly([0.0, -float(horizon)]),
            utopian_point=_readonly([max_value, -1.0]),
            return_bound=max_value,
        )

        zero = _readonly([0.0, 0.0])
        model = Momdp(
            num_states=rows * c,
            num_actions=len(Direction),
            num_objectives=2,
            horizon=horizon,
            initial_state=0,
            terminals=terminals,
            rewards={key: zero for key in transitions},
            transitions=transitions,
            arrival_rewards={
                s: _readonly([v / max_value, 0.0]) for s, v in treasure_states.items()
            },
            terminal_bonus=_readonly([0.0, 1.0]),
            name=suffix,
            reference_point=_readonly([0.0, 0.0]),
            utopian_point=_readonly([1.0, (horizon - 1) / horizon]),
            return_bound=1.0,
        )

        normalization = NormalizationMap(
            offsets=np.array([0.0, -float(horizon)]),
            scales=np.array([max_value, float(horizon)]),
        )
        instance = GdstInstance(
            config=config,
            rows=rows,
            floor=floor,
            treasures=treasures,
            raw_model=raw_model,
            model=model,
            normalization=normalization,
        )
        logger.debug(f"Generated {instance!r} with floor {floor}")
        return instance

    @staticmethod
    def treasure_values(floor: list[int]) -> list[int]:
        """
        깊이에 따른 1..1000 선형 보간, 반올림 후 강한 증가를 맞춥니다.

        앞에서부터 +1 올리고, 뒤에서부터 1000 상한을 지키도록 내립니다.
        """
        c = len(floor)
        if c == 1:
            return [MAX_TREASURE]
        span = floor[-1] - floor[0]
        if span > 0:
            raw = [1 + (MAX_TREASURE - 1) * (d - floor[0]) / span for d in floor]
        else:
            raw = [1 + (MAX_TREASURE - 1) * j / (c - 1) for j in range(c)]
        values = [int(round(x)) for x in raw]
        for j in range(1, c):
            values[j] = max(values[j], values[j - 1] + 1)
        values[-1] = min(values[-1], MAX_TREASURE)
        for j in range(c - 2, -1, -1):
            values[j] = min(values[j], values[j + 1] - 1)
        return values

    @staticmethod
    def _move(row: int, column: int, direction: Direction, rows: int, floor: list[int]):
        dr, dc = direction.delta
        r, col = row + dr, column + dc
        if not (0 <= r < rows and 0 <= col < len(floor)) or r > floor[col]:
            return row, column
        return r, col

    def _transitions(
        self, rows: int, columns: int, floor: list[int], noise: float
    ) -> dict[tuple[int, int], tuple[tuple[int, float], ...]]:
        transitions: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}
        for row in range(rows):
            for column in range(columns):
                state = row * columns + column
                if row == floor[column]:
                    continue  # 보물 칸: 종료
                if row > floor[column]:
                    # 암반: 도달 불가, 검증을 위해 제자리 전이만 둠
                    for action in Direction:
                        transitions[(state, int(action))] = ((state, 1.0),)
                    continue
                outcomes = {d: self._move(row, column, d, rows, floor) for d in Direction}
                for action in Direction:
                    merged: dict[int, float] = {}
                    intended = outcomes[action]
                    if noise < 1.0:
                        key = intended[0] * columns + intended[1]
                        merged[key] = merged.get(key, 0.0) + (1.0 - noise)
                    if noise > 0.0:
                        for d in Direction:
                            r, col = outcomes[d]
                            key = r * columns + col
                            merged[key] = merged.get(key, 0.0) + noise / len(Direction)
                    transitions[(state, int(action))] = tuple(sorted(merged.items()))
        return transitions


class ShortestPathOracle:
    """
    결정적 GDST의 BFS 전선

    각 보물까지의 최단 단계 수 d_j (다른 보물 칸은 통과 불가)가 H 이하이면
    정규화 점 (v_j / v_max, (H − d_j)/H)을 만들고 CCS로 가지치기합니다.
    """

    def __init__(self, instance: GdstInstance):
        self.instance = instance

    def distances(self) -> dict[int, int]:
        instance = self.instance
        treasure_states = {instance.state_of(t.row, t.column) for t in instance.treasures}
        start = instance.model.initial_state
        distance = {start: 0}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            if state in treasure_states:
                continue
            row, column = instance.cell_of(state)
            for direction in Direction:
                r, col = GdstGenerator._move(row, column, direction, instance.rows, instance.floor)
                nxt = instance.state_of(r, col)
                if nxt not in distance:
                    distance[nxt] = distance[state] + 1
                    queue.append(nxt)
        return {s: d for s, d in distance.items() if s in treasure_states}

    def points(self) -> list[tuple[float, float]]:
        instance = self.instance
        horizon = instance.horizon
        max_value = max(t.value for t in instance.treasures)
        distances = self.distances()
        found = []
        for treasure in instance.treasures:
            d = distances.get(instance.state_of(treasure.row, treasure.column))
            if d is not None and d <= horizon:
                found.append((treasure.value / max_value, (horizon - d) / horizon))
        return found

    def front(self) -> PointSet:
        points = self.points()
        if not points:
            return PointSet.zero(2)
        return PointSet(points).prune_ccs()


__all__ = ["GdstGenerator", "ShortestPathOracle"]
