"""
Selection 도메인 단위 테스트

CZT 공 집합 (거리, 신뢰 반지름, 공 활성화)과 UCB 계열 전략을 검증합니다.
"""

import logging
import math

import numpy as np
import pytest

from chmcts.app.domain.geometry.models import PointSet
from chmcts.app.domain.search.models import ChanceNode, DecisionNode
from chmcts.app.domain.selection.calculators import (
    ChebychevUCB,
    HypervolumeUCB,
    ParetoUCB1,
    StrategyFactory,
    ZoomingStrategy,
)
from chmcts.app.domain.selection.models import BallSet, metric_d
from chmcts.app.shared.exceptions import UsageException


def _node_with_children(q_sets: dict[int, list[tuple[float, float]]], visits: dict[int, int]):
    """주어진 𝒬 집합과 방문 수를 가진 루트 결정 노드"""
    node = DecisionNode(state=0, depth=0, value_set=PointSet.zero(2), terminal=False)
    for action, points in q_sets.items():
        child = ChanceNode(state=0, action=action, depth=0, q_set=PointSet(points))
        child.visit_count = visits[action]
        node.children[action] = child
    return node


@pytest.mark.unit
class TestMetric:
    """상태별 유사도 거리 테스트"""

    def test_same_action_scales_sup_norm(self):
        d = metric_d((np.array([0.2, 0.8]), 1), (np.array([0.5, 0.5]), 1), 2.0, 1.0)
        assert d == pytest.approx(0.6)

    def test_different_actions_are_bound_apart(self):
        assert metric_d((np.array([0.5, 0.5]), 0), (np.array([0.5, 0.5]), 1), 1.0, 3.0) == 3.0

    def test_per_action_lipschitz(self):
        d = metric_d((np.array([0.0, 1.0]), 1), (np.array([1.0, 0.0]), 1), [0.1, 0.5], 1.0)
        assert d == pytest.approx(0.5)

    def test_metric_axioms(self, rng):
        """C_s(a) ∈ [0, 2U]이면 대칭, 항등, 삼각 부등식이 성립 (10⁴개 세 쌍)"""
        actions = 3
        for _ in range(10000):
            bound = float(rng.uniform(0.05, 5.0))
            lipschitz = rng.uniform(0.0, 2.0 * bound, size=actions).tolist()
            x, y, z = (
                (rng.dirichlet(np.ones(3)), int(rng.integers(actions))) for _ in range(3)
            )
            assert metric_d(x, x, lipschitz, bound) == 0.0
            dxy = metric_d(x, y, lipschitz, bound)
            assert dxy >= 0.0
            assert dxy == pytest.approx(metric_d(y, x, lipschitz, bound))
            via = metric_d(x, z, lipschitz, bound) + metric_d(z, y, lipschitz, bound)
            assert dxy <= via + 1e-12


@pytest.mark.unit
class TestBallSet:
    """CZT 공 집합 테스트"""

    def test_initial_balls(self):
        balls = BallSet(actions=range(3), dimension=2, bound=1.0, lipschitz=0.5)
        assert len(balls) == 3
        assert balls.round == 1
        for action, ball in enumerate(balls.balls):
            assert ball.center_action == action
            assert ball.center_weight.tolist() == [0.5, 0.5]
            assert ball.radius == 0.5

    def test_confidence_is_zero_in_first_round(self):
        balls = BallSet(actions=range(2), dimension=2)
        assert all(balls.confidence(ball) == 0.0 for ball in balls.balls)

    def test_confidence_formula(self):
        balls = BallSet(actions=range(2), dimension=2)
        ball = balls.balls[0]
        balls.update(ball, 0, np.array([0.5, 0.5]), 0.3)
        assert balls.round == 2
        assert balls.confidence(ball) == pytest.approx(4.0 * math.sqrt(math.log(2) / 2))
        assert ball.mean_reward == pytest.approx(0.3)

    def test_lipschitz_outside_range(self):
        with pytest.raises(ValueError):
            BallSet(actions=range(2), dimension=2, bound=1.0, lipschitz=2.5)
        with pytest.raises(ValueError):
            BallSet(actions=range(2), dimension=2, bound=0.0)

    def test_fresh_choice_breaks_ties_by_action(self):
        balls = BallSet(actions=range(3), dimension=2)
        action, ball = balls.choose(np.array([0.3, 0.7]))
        assert action == 0
        assert ball is balls.balls[0]

    def test_choice_respects_allowed_actions(self):
        balls = BallSet(actions=range(3), dimension=2)
        action, _ = balls.choose(np.array([0.3, 0.7]), allowed=[2])
        assert action == 2

    def test_ball_activation(self):
        """신뢰 반지름이 반지름 이하로 줄면 반지름 절반의 자식 공이 생김"""
        balls = BallSet(actions=[0], dimension=2, bound=1.0, lipschitz=1.0)
        parent = balls.balls[0]
        weights = np.array([0.9, 0.1])
        child = None
        for pulls in range(1, 200):
            child = balls.update(parent, 0, weights, 0.5)
            if child is not None:
                break
        assert child is not None
        assert balls.confidence(parent) <= parent.radius
        assert child.radius == pytest.approx(parent.radius / 2)
        assert child.center_weight.tolist() == weights.tolist()
        assert len(balls) == 2
        assert pulls == parent.pulls

    def test_smaller_ball_takes_precedence(self):
        """(w, a)가 더 작은 활성 공에 들어 있으면 큰 공의 dom에서 빠짐"""
        balls = BallSet(actions=[0, 1], dimension=2, bound=1.0, lipschitz=1.0)
        parent = balls.balls[0]
        for _ in range(200):
            if balls.update(parent, 0, np.array([0.5, 0.5]), 1.0) is not None:
                break
        assert balls.dominated_actions(parent, np.array([0.5, 0.5]), [0, 1]) == [1]

    def test_chosen_action_lies_in_domain(self, rng):
        """고른 행동 a에 대해 (w, a)는 고른 공의 dom_k에 속함"""
        balls = BallSet(actions=range(3), dimension=2, bound=1.0, lipschitz=[1.0, 0.5, 2.0])
        for _ in range(500):
            weights = rng.dirichlet(np.ones(2))
            allowed = sorted(rng.choice(3, size=int(rng.integers(1, 4)), replace=False).tolist())
            action, ball = balls.choose(weights, allowed)
            assert action in balls.dominated_actions(ball, weights, allowed)
            balls.update(ball, action, weights, float(rng.random()))

    def test_activated_balls_get_pulled(self):
        """
        맥락이 단체의 꼭짓점을 순환하면 새 공은 다음 차례에 그 꼭짓점의 가장 작은 공

        반지름 1/2 이하의 공은 자기 꼭짓점만 덮으므로 꼭짓점마다 안 뽑힌 공은 최신 것 하나뿐.
        """
        vertices = [np.eye(3)[i] for i in range(3)]
        balls = BallSet(actions=[0], dimension=3, bound=1.0, lipschitz=1.0)
        for k in range(3000):
            weights = vertices[k % 3]
            action, ball = balls.choose(weights)
            assert action == 0
            balls.update(ball, action, weights, 0.5)

        assert len(balls) >= 7
        for vertex in vertices:
            at_vertex = [b for b in balls.balls if np.array_equal(b.center_weight, vertex)]
            assert at_vertex
            assert [b.radius for b in at_vertex] == sorted(
                (b.radius for b in at_vertex), reverse=True
            )
            assert all(b.pulls > 0 for b in at_vertex[:-1])
        assert sum(b.pulls == 0 for b in balls.balls) <= 3

    def test_ball_count_radii_and_separation(self, rng):
        """
        시행마다 공은 많아야 하나 늘고, 반지름은 C_s(a)·2^(−j),
        같은 행동과 같은 반지름 r의 두 공 중심은 C_s(a)·‖·‖∞로 r보다 멀리 떨어짐
        """
        lipschitz = [0.9, 0.6, 0.75]
        balls = BallSet(actions=range(3), dimension=2, bound=1.0, lipschitz=lipschitz)
        rounds = 3000
        for _ in range(rounds):
            weights = rng.dirichlet(np.ones(2))
            action, ball = balls.choose(weights)
            balls.update(ball, action, weights, float(rng.random()))

        assert balls.round == rounds + 1
        assert len(balls) <= rounds + 3
        assert len(balls) > 3
        for ball in balls.balls:
            exponent = np.log2(lipschitz[ball.center_action] / ball.radius)
            assert exponent == pytest.approx(round(exponent))
            assert exponent >= 0
        for i, first in enumerate(balls.balls):
            for second in balls.balls[i + 1 :]:
                if first.center_action == second.center_action and first.radius == second.radius:
                    gap = metric_d(
                        (first.center_weight, first.center_action),
                        (second.center_weight, second.center_action),
                        lipschitz,
                        1.0,
                    )
                    assert gap > first.radius


@pytest.mark.unit
class TestStrategies:
    """UCB 계열 전략 테스트"""

    def test_factory(self, example1):
        assert StrategyFactory.names() == ["zooming", "hypervolume", "chebychev", "pareto-ucb"]
        assert isinstance(StrategyFactory.create("zooming", example1), ZoomingStrategy)
        strategy = StrategyFactory.create("chebychev", example1, exploration=0.5)
        assert strategy.exploration == 0.5
        with pytest.raises(UsageException):
            StrategyFactory.create("random", example1)

    def test_hypervolume_needs_two_objectives(self, example1):
        model = example1.replace(num_objectives=3, reference_point=None, utopian_point=None)
        with pytest.raises(UsageException):
            HypervolumeUCB(model)

    def test_unexpanded_actions_first(self, example1):
        node = _node_with_children({0: [(1, 1)]}, {0: 3})
        assert HypervolumeUCB(example1).select(node, np.array([0.5, 0.5]), None) == 1

    def test_hypervolume_prefers_larger_volume(self, example1):
        node = _node_with_children(
            {0: [(1, 1)], 1: [(3, 3)], 2: [(2, 2)]}, {0: 10, 1: 10, 2: 10}
        )
        assert HypervolumeUCB(example1, exploration=0.0).select(node, None, None) == 1

    def test_chebychev_uses_weights(self, example1):
        node = _node_with_children({0: [(6, 0)], 1: [(0, 6)], 2: [(0, 0)]}, {0: 5, 1: 5, 2: 5})
        strategy = ChebychevUCB(example1, exploration=0.0)
        assert strategy.select(node, np.array([0.9, 0.1]), None) == 0
        assert strategy.select(node, np.array([0.1, 0.9]), None) == 1

    def test_chebychev_ideal_point_fallback(self, example1):
        strategy = ChebychevUCB(example1.replace(utopian_point=None))
        node = _node_with_children({0: [(2, 0)], 1: [(0, 5)]}, {0: 1, 1: 1})
        assert strategy.utopian_for(node).tolist() == [2.0, 5.0]

    def test_pareto_ucb_picks_front_owner(self, example1, rng):
        node = _node_with_children(
            {0: [(6, 0)], 1: [(0, 6)], 2: [(0, 0)]}, {0: 100, 1: 100, 2: 100}
        )
        strategy = ParetoUCB1(example1)
        assert strategy.owners(node, [0, 1, 2]) == [0, 1]
        picks = {strategy.select(node, None, rng) for _ in range(50)}
        assert picks == {0, 1}
        assert strategy.recommend(node, None) == 0

    def test_zooming_normalizes_into_bound(self, example1):
        strategy = ZoomingStrategy(example1)
        node = DecisionNode(state=0, depth=0, value_set=PointSet.zero(2), terminal=False)
        strategy.ball_set(node)
        assert strategy.normalize(node, 3.0) == pytest.approx(0.5)
        assert strategy.normalize(node, 12.0) == 1.0
        assert strategy.normalize(node, -1.0) == 0.0
        assert node.bandit_state.clamp_warned

    def test_zooming_warns_on_negative_rewards(self, example1, caplog):
        negative = example1.replace(rewards={**example1.rewards, (0, 0): np.array([-1.0, 0.0])})
        assert negative.has_negative_rewards
        assert not example1.has_negative_rewards
        with caplog.at_level(logging.WARNING):
            ZoomingStrategy(example1)
        assert "negative reward" not in caplog.text
        with caplog.at_level(logging.WARNING):
            ZoomingStrategy(negative)
        assert "negative reward components" in caplog.text

    def test_context_free_strategies_ignore_weights(self, example1):
        """하이퍼볼륨과 ParetoUCB1은 같은 난수열이면 w와 무관하게 같은 행동"""
        node = _node_with_children(
            {0: [(6, 0), (1, 4)], 1: [(0, 6)], 2: [(3, 3)]}, {0: 7, 1: 3, 2: 12}
        )
        for strategy in (HypervolumeUCB(example1), ParetoUCB1(example1)):
            assert not strategy.context_aware
            picks = {
                strategy.select(node, np.array([w, 1.0 - w]), np.random.default_rng(5))
                for w in np.linspace(0.0, 1.0, 21)
            }
            assert len(picks) == 1

    def test_pareto_ucb_uniform_over_front_owners(self, example1, rng):
        node = _node_with_children(
            {0: [(1, 0)], 1: [(0, 1)], 2: [(0, 0)]}, {0: 50, 1: 50, 2: 50}
        )
        strategy = ParetoUCB1(example1)
        assert strategy.owners(node, [0, 1, 2]) == [0, 1]
        draws = np.array([strategy.select(node, None, rng) for _ in range(10000)])
        assert set(draws.tolist()) == {0, 1}
        assert np.mean(draws == 0) == pytest.approx(0.5, abs=0.02)
