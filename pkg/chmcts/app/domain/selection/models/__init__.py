"""
Selection Domain Models

- Ball: 유사도 공간 𝒲_D × A 위의 활성 공
- BallSet: 결정 노드 하나의 CZT 상태 (활성 공 목록, 라운드 k, 상수 U / C_s)
- metric_d: 상태별 유사도 거리 d_s
"""

import math
from typing import Mapping, Sequence

import numpy as np

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.types import Vector

logger = get_logger(__name__)

# 공 포함 판정과 지수 동률 판정에 쓰는 허용 오차
CONTAINMENT_TOLERANCE = 1e-12
INDEX_TIE_TOLERANCE = 1e-12


def metric_d(
    first: tuple[Vector, int],
    second: tuple[Vector, int],
    lipschitz: Mapping[int, float] | Sequence[float] | float,
    bound: float,
) -> float:
    """
    d_s((w, a), (w', a')) = C_s(a)·‖w − w'‖∞ (a = a'), U (그 외)

    Args:
        first, second: (가중치, 행동) 쌍
        lipschitz: 행동별 C_s(a) 또는 모든 행동에 공통인 값
        bound: U > 0
    """
    w1, a1 = first
    w2, a2 = second
    if a1 != a2:
        return float(bound)
    scale = lipschitz if isinstance(lipschitz, (int, float)) else lipschitz[a1]
    gap = float(np.max(np.abs(np.asarray(w1, dtype=np.float64) - np.asarray(w2, dtype=np.float64))))
    return float(scale) * gap


class Ball:
    """
    활성 공 B

    중심 (center_weight, center_action), 반지름 r(B), 선택 횟수 n(B), 평균 보상 ν(B).
    """

    __slots__ = ("center_weight", "center_action", "radius", "pulls", "mean_reward", "slot")

    def __init__(self, center_weight: Vector, center_action: int, radius: float):
        weight = np.array(center_weight, dtype=np.float64)
        weight.setflags(write=False)
        self.center_weight = weight
        self.center_action = int(center_action)
        self.radius = float(radius)
        self.pulls = 0
        self.mean_reward = 0.0
        self.slot = -1

    def record(self, reward: float) -> None:
        """n(B) 증가와 평균 갱신."""
        self.pulls += 1
        self.mean_reward += (reward - self.mean_reward) / self.pulls

    def __repr__(self) -> str:
        return (
            f"Ball(w={self.center_weight.tolist()}, a={self.center_action}, r={self.radius:g}, "
            f"n={self.pulls}, nu={self.mean_reward:.4f})"
        )


class BallSet:
    """
    CZT 상태

    초기화: 행동마다 중심 (w̄, a), 반지름 C_s(a)인 공 하나 (w̄ = 1/D).
    라운드 k는 1부터 시작하며 이 노드에서 update가 호출될 때마다 1 증가합니다.
    공 중심 사이 거리 행렬은 공이 활성화될 때만 다시 계산합니다.

    사용 예시:
        balls = BallSet(actions=range(4), dimension=2, bound=1.0, lipschitz=1.0)
        action, ball = balls.choose(w, allowed=[0, 1, 2, 3])
        balls.update(ball, action, w, reward=0.7)
    """

    def __init__(
        self,
        actions: Sequence[int],
        dimension: int,
        bound: float = 1.0,
        lipschitz: float | Sequence[float] = 1.0,
    ):
        if bound <= 0.0:
            raise ValueError("U must be positive")
        self.actions = [int(a) for a in actions]
        self.dimension = int(dimension)
        self.bound = float(bound)
        if isinstance(lipschitz, (int, float)):
            self.lipschitz = {a: float(lipschitz) for a in self.actions}
        else:
            self.lipschitz = {a: float(lipschitz[a]) for a in self.actions}
        if any(not 0.0 <= c <= 2.0 * self.bound for c in self.lipschitz.values()):
            raise ValueError("C_s(a) must satisfy 0 <= C_s(a) <= 2U")
        center = np.full(self.dimension, 1.0 / self.dimension)
        self.balls: list[Ball] = []
        self._pulls = np.zeros(0)
        self._means = np.zeros(0)
        self._geometry: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None
        for a in self.actions:
            self._activate(Ball(center, a, self.lipschitz[a]))
        self.round = 1
        self.selected: Ball | None = None
        self.clamp_warned = False

    def _activate(self, ball: Ball) -> None:
        ball.slot = len(self.balls)
        self.balls.append(ball)
        self._pulls = np.append(self._pulls, 0.0)
        self._means = np.append(self._means, 0.0)
        self._geometry = None

    # ====================
    # Geometry
    # ====================

    def geometry(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(중심 가중치, 중심 행동, 반지름, 중심 사이 d_s 행렬)"""
        if self._geometry is None:
            centers = np.vstack([b.center_weight for b in self.balls])
            owners = np.array([b.center_action for b in self.balls], dtype=np.int64)
            radii = np.array([b.radius for b in self.balls])
            scales = np.array([self.lipschitz[a] for a in owners])
            sup = np.max(np.abs(centers[:, None, :] - centers[None, :, :]), axis=2)
            same = owners[:, None] == owners[None, :]
            pairwise = np.where(same, scales[:, None] * sup, self.bound)
            self._geometry = (centers, owners, radii, pairwise)
        return self._geometry

    def domains(self, weights: Vector, allowed: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """
        dom_k 행렬: [i, j]는 (w, allowed[j])가 공 i에 들어 있고
        반지름이 더 작은 어떤 활성 공에도 들어 있지 않은지 여부.
        """
        centers, owners, radii, _ = self.geometry()
        candidates = np.asarray(list(allowed), dtype=np.int64)
        scales = np.array([self.lipschitz[int(a)] for a in candidates])
        sup = np.max(np.abs(centers - np.asarray(weights, dtype=np.float64)), axis=1)
        gaps = np.where(
            owners[:, None] == candidates[None, :], sup[:, None] * scales[None, :], self.bound
        )
        inside = gaps <= radii[:, None] + CONTAINMENT_TOLERANCE
        smallest = np.where(inside, radii[:, None], np.inf).min(axis=0)
        return candidates, inside & (radii[:, None] <= smallest[None, :])

    def dominated_actions(self, ball: Ball, weights: Vector, allowed: Sequence[int]) -> list[int]:
        """
        dom_k(B)에 속하는 (w, a)의 행동 a 목록.

        (w, a) ∈ B 이면서 반지름이 더 작은 어떤 활성 공에도 속하지 않아야 합니다.
        """
        candidates, domain = self.domains(weights, allowed)
        return [int(a) for a in candidates[domain[ball.slot]]]

    # ====================
    # Index
    # ====================

    def confidence(self, ball: Ball) -> float:
        """conf_k(B) = 4·√(ln k / (1 + n_k(B)))"""
        return 4.0 * math.sqrt(math.log(self.round) / (1.0 + ball.pulls))

    def indices(self, slots: np.ndarray | None = None) -> np.ndarray:
        """
        I_k(B) = r(B) + min_{B'} (I_pre(B') + 𝒟(B, B')), I_pre = ν + r + conf

        slots를 주면 그 공들의 지수만 계산합니다.
        """
        _, _, radii, pairwise = self.geometry()
        confidence = 4.0 * np.sqrt(math.log(self.round) / (1.0 + self._pulls))
        pre = self._means + radii + confidence
        if slots is None:
            slots = np.arange(len(self.balls))
        return radii[slots] + np.min(pre[None, :] + pairwise[slots], axis=1)

    def choose(self, weights: Vector, allowed: Sequence[int] | None = None) -> tuple[int, Ball]:
        """
        관련 있는 공 중 지수가 가장 큰 공과 그 공의 dom_k(B)에서 고른 행동.

        동률은 작은 반지름, 그다음 작은 행동 id 순으로 깹니다.
        행동은 중심 행동이 dom_k(B)에 있으면 중심 행동, 아니면 dom_k(B)의 가장 작은 행동.
        """
        candidates, domain = self.domains(weights, self.actions if allowed is None else allowed)
        relevant = np.flatnonzero(domain.any(axis=1))
        indices = self.indices(relevant)

        best: tuple[float, float, int] | None = None
        best_choice: tuple[int, Ball] | None = None
        for slot, value in zip(relevant.tolist(), indices.tolist()):
            ball = self.balls[slot]
            witnesses = candidates[domain[slot]]
            if ball.center_action in witnesses:
                action = ball.center_action
            else:
                action = int(witnesses.min())
            if best is None or self._better(value, ball.radius, action, best):
                best = (value, ball.radius, action)
                best_choice = (action, ball)

        assert best_choice is not None, "every (w, a) must be covered by a relevant ball"
        return best_choice

    @staticmethod
    def _better(value: float, radius: float, action: int, best: tuple[float, float, int]) -> bool:
        best_value, best_radius, best_action = best
        if value > best_value + INDEX_TIE_TOLERANCE:
            return True
        if value < best_value - INDEX_TIE_TOLERANCE:
            return False
        if radius != best_radius:
            return radius < best_radius
        return action < best_action

    # ====================
    # Update
    # ====================

    def update(self, ball: Ball, action: int, weights: Vector, reward: float) -> Ball | None:
        """
        선택된 공에 보상을 반영하고 라운드를 진행합니다.

        갱신 후 conf_k(B) ≤ r(B)이면 중심 (w_k, action), 반지름 r(B)/2인 공을 추가해 반환합니다.
        """
        ball.record(reward)
        self._pulls[ball.slot] = ball.pulls
        self._means[ball.slot] = ball.mean_reward
        self.round += 1
        if self.confidence(ball) <= ball.radius:
            child = Ball(np.asarray(weights, dtype=np.float64), action, ball.radius / 2.0)
            self._activate(child)
            logger.debug(f"Activated {child!r} (k={self.round}, |balls|={len(self.balls)})")
            return child
        return None

    def __len__(self) -> int:
        return len(self.balls)


__all__ = ["Ball", "BallSet", "metric_d", "CONTAINMENT_TOLERANCE"]
