"""
MOMDP Domain Calculators

- MomdpValidator: 불변식 위반 목록 계산
- TrajectorySimulator: 탐험 정책으로 궤적 한 개 생성
- PolicyEvaluator: 결정적 정책의 정확한 기대 누적 보상
"""

import numpy as np

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import BaseCalculator
from chmcts.app.shared.exceptions import ValidationException
from chmcts.app.shared.types import Vector
from chmcts.app.domain.momdp.models import (
    DeterministicPolicy,
    ExplorationPolicy,
    ModelViolation,
    Momdp,
    Trajectory,
    TrajectoryStep,
)
from chmcts.app.domain.momdp.schemas import ValidationInput, ValidationReport

logger = get_logger(__name__)

PROBABILITY_TOLERANCE = 1e-9


class MomdpValidator(BaseCalculator[ValidationInput, ValidationReport]):
    """
    모델 불변식 검사기

    위반은 예외가 아니라 반환값입니다. 모든 위반을 (s, a) 위치와 함께 모읍니다.
    """

    async def calculate(self, input_data: ValidationInput) -> ValidationReport:
        return ValidationReport(violations=self.validate(input_data.model))

    def validate(self, model: Momdp) -> list[ModelViolation]:
        violations: list[ModelViolation] = []
        S, A, D = model.num_states, model.num_actions, model.num_objectives

        if not 0 <= model.initial_state < S:
            violations.append(
                ModelViolation("initial_state", f"initial state {model.initial_state} >= {S}")
            )
        for t in sorted(model.terminals):
            if not 0 <= t < S:
                violations.append(
                    ModelViolation("terminal", f"terminal id {t} out of range", state=t)
                )

        for (s, a), vector in sorted(model.rewards.items()):
            if not (0 <= s < S and 0 <= a < A):
                violations.append(ModelViolation("index", "reward index out of range", s, a))
                continue
            vector = np.asarray(vector)
            if vector.shape != (D,):
                violations.append(
                    ModelViolation(
                        "dimension",
                        f"reward has {vector.size} components, expected {D}",
                        s,
                        a,
                    )
                )
            elif not np.all(np.isfinite(vector)):
                violations.append(ModelViolation("finite", "reward is not finite", s, a))

        for (s, a), successors in sorted(model.transitions.items()):
            if not (0 <= s < S and 0 <= a < A):
                violations.append(ModelViolation("index", "transition index out of range", s, a))
                continue
            total = 0.0
            for s2, p in successors:
                if not 0 <= s2 < S:
                    violations.append(
                        ModelViolation("successor", f"successor {s2} out of range", s, a)
                    )
                if not np.isfinite(p) or p < 0.0:
                    violations.append(
                        ModelViolation("probability", f"probability {p} is negative", s, a)
                    )
                total += p
            if abs(total - 1.0) > PROBABILITY_TOLERANCE:
                violations.append(
                    ModelViolation("probability", f"probabilities sum {total:g}", s, a)
                )

        for s in range(S):
            if model.is_terminal(s):
                continue
            for a in range(A):
                if not model.successors(s, a):
                    violations.append(
                        ModelViolation("transition", "no successors for non-terminal pair", s, a)
                    )

        for s, vector in sorted(model.arrival_rewards.items()):
            if not 0 <= s < S:
                violations.append(ModelViolation("index", "arrival reward state out of range", s))
            elif np.asarray(vector).shape != (D,) or not np.all(np.isfinite(vector)):
                violations.append(
                    ModelViolation(
                        "dimension", f"arrival reward must have {D} finite components", s
                    )
                )

        for label in ("terminal_bonus", "reference_point", "utopian_point"):
            vector = getattr(model, label)
            if vector is not None and np.asarray(vector).shape != (D,):
                violations.append(ModelViolation("dimension", f"{label} must have {D} components"))

        return violations


class TrajectorySimulator:
    """
    궤적 시뮬레이터

    s̄에서 시작해 최대 H 단계 또는 종료 상태 도착까지 진행합니다.
    """

    def __init__(self, model: Momdp):
        self.model = model

    def simulate(
        self,
        policy: ExplorationPolicy,
        weights: Vector,
        rng: np.random.Generator,
    ) -> Trajectory:
        """
        Raises:
            ValidationException: 정책이 합법이 아닌 행동을 반환할 때 (단계 번호 포함)
        """
        model = self.model
        state = model.initial_state
        total = np.zeros(model.num_objectives)
        steps: list[TrajectoryStep] = []

        for t in range(model.horizon):
            if model.is_terminal(state):
                break
            action = policy(state, t, weights)
            if not isinstance(action, (int, np.integer)) or not 0 <= action < model.num_actions:
                raise ValidationException(
                    f"Policy returned invalid action {action!r} at step {t}",
                    details={"step": t, "state": state, "action": repr(action)},
                )
            action = int(action)
            next_state = model.sample_transition(state, action, rng)
            reward = model.step_reward(state, action, next_state, t)
            total = total + reward
            steps.append(
                TrajectoryStep(
                    timestep=t,
                    state=state,
                    action=action,
                    reward=tuple(float(x) for x in reward),
                    next_state=next_state,
                )
            )
            state = next_state

        return Trajectory(steps=tuple(steps), cumulative_return=tuple(float(x) for x in total))


class PolicyEvaluator:
    """
    결정적 정책의 정확한 가치 V^π = E[X^π]

    시각별 상태 분포를 앞으로 전파하면서 기대 단계 보상을 누적합니다.
    기대값의 선형성 때문에 결과는 (s, t)에 대한 역방향 DP
    V_t(s) = Σ_{s'} T(s, π(s, t), s')·(r(s, π(s, t), s', t) + V_{t+1}(s')), V_H = 0 의
    V_0(s_0)과 같습니다. 앞으로 전파하면 도달 가능한 (s, t)만 정책을 조회하므로
    나머지 항목은 정의되지 않아도 됩니다.
    """

    def __init__(self, model: Momdp):
        self.model = model

    def evaluate(self, policy: DeterministicPolicy) -> Vector:
        """
        Raises:
            ValidationException: 도달 가능한 (s, t)에서 정책이 정의되지 않았을 때
        """
        model = self.model
        value = np.zeros(model.num_objectives)
        distribution: dict[int, float] = {model.initial_state: 1.0}

        for t in range(model.horizon):
            following: dict[int, float] = {}
            for state, mass in sorted(distribution.items()):
                if model.is_terminal(state) or mass == 0.0:
                    continue
                action = policy.action(state, t)
                for next_state, p in model.successors(state, action):
                    if p == 0.0:
                        continue
                    weight = mass * p
                    value += weight * model.step_reward(state, action, next_state, t)
                    following[next_state] = following.get(next_state, 0.0) + weight
            distribution = following
            if not distribution:
                break
        return value


__all__ = [
    "MomdpValidator",
    "TrajectorySimulator",
    "PolicyEvaluator",
    "PROBABILITY_TOLERANCE",
]
