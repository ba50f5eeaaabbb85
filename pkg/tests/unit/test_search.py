"""
CHMCTS 트리 탐색 단위 테스트

시행 루프, 백업, 라벨링, 예산, 트리 정책 평가, 탐색 서비스를 검증합니다.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from chmcts.app.domain.chvi.calculators import ChviSolver
from chmcts.app.domain.geometry.models import PointSet, PruneMode
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.schemas import ModelSourceRequest
from chmcts.app.domain.search.calculators import ThtsEngine, TreePolicyEvaluator, TrialObserver
from chmcts.app.domain.search.models import ChanceNode, SearchBudget, SearchConfig
from chmcts.app.domain.search.schemas import SearchRequest
from chmcts.app.domain.search.service import SearchService
from chmcts.app.domain.selection.calculators import StrategyFactory
from chmcts.app.shared.exceptions import BusinessLogicException

EXAMPLE1_CCS = PointSet([(0, 6), (6, 0)])


def _engine(model, name: str = "zooming", **config) -> ThtsEngine:
    return ThtsEngine(model, StrategyFactory.create(name, model), SearchConfig(**config))


def _rngs(seed: int = 0) -> tuple[np.random.Generator, np.random.Generator]:
    return np.random.default_rng(seed), np.random.default_rng(seed + 1)


class ExactReturnObserver(TrialObserver):
    """시행 직전의 트리 정책 가치와 시행의 실현 보상을 나란히 기록"""

    def __init__(self, engine: ThtsEngine):
        self.evaluator = TreePolicyEvaluator(engine)
        self.pending: np.ndarray | None = None
        self.pairs: list[tuple[np.ndarray, np.ndarray]] = []

    def on_trial_start(self, trial, weights, tree) -> None:
        self.pending = self.evaluator.evaluate(tree, weights)

    def on_trial_end(self, outcome, tree, stats) -> None:
        self.pairs.append((self.pending, outcome.realized_return))


@pytest.mark.unit
class TestSearchBudget:
    """예산 스키마 테스트"""

    def test_exactly_one(self):
        with pytest.raises(ValidationError):
            SearchBudget(trials=10, backups=10)
        with pytest.raises(ValidationError):
            SearchBudget()
        assert SearchBudget(seconds=0.5).describe() == "0.5 s"

    def test_zero_budget_rejected(self, example1):
        with pytest.raises(BusinessLogicException):
            _engine(example1).run_trials(SearchBudget(trials=0), *_rngs())


@pytest.mark.unit
class TestThtsEngine:
    """시행 루프와 백업 테스트"""

    @pytest.mark.parametrize("strategy", ["zooming", "hypervolume", "chebychev", "pareto-ucb"])
    def test_example1_solved_with_labelling(self, example1, strategy):
        engine = _engine(example1, strategy)
        result = engine.run_trials(SearchBudget(trials=5000), *_rngs())
        assert result.stats.stop_reason == "solved"
        assert result.tree.is_solved
        assert engine.extract_root_ccs(result.tree) == EXAMPLE1_CCS

    def test_estimates_stay_achievable_without_labelling(self, example1):
        engine = _engine(example1, labelling=False)
        result = engine.run_trials(SearchBudget(backups=300), *_rngs(3))
        assert result.stats.stop_reason == "budget"
        assert result.stats.backups_performed >= 300
        assert not result.tree.root.labelled
        assert engine.extract_root_ccs(result.tree).is_covered_by(EXAMPLE1_CCS)

    def test_trial_records(self, example1):
        result = _engine(example1, labelling=False).run_trials(
            SearchBudget(trials=50), *_rngs(), keep_trials=True
        )
        assert [outcome.trial for outcome in result.trials] == list(range(50))
        for outcome in result.trials:
            assert 1 <= outcome.path_length <= example1.horizon
            assert outcome.weights.sum() == pytest.approx(1.0)
        assert result.stats.trials_run == 50
        assert result.stats.nodes_created == result.tree.node_count

    def test_node_limit(self, example1):
        result = _engine(example1, node_limit=2).run_trials(SearchBudget(trials=100), *_rngs())
        assert result.stats.stop_reason == "node-limit"
        assert result.stats.trials_run == 1

    def test_resume_existing_tree(self, example1):
        engine = _engine(example1, labelling=False)
        first = engine.run_trials(SearchBudget(trials=20), *_rngs())
        second = engine.run_trials(SearchBudget(trials=20), *_rngs(5), tree=first.tree)
        assert second.tree is first.tree
        assert first.tree.root.visit_count == 40

    def test_empty_tree_has_no_front(self, example1):
        engine = _engine(example1)
        with pytest.raises(BusinessLogicException):
            engine.extract_root_ccs(engine.new_tree())

    def test_pareto_mode_front(self, example1):
        engine = _engine(example1, "chebychev", prune_mode=PruneMode.PARETO)
        result = engine.run_trials(SearchBudget(trials=5000), *_rngs())
        assert engine.extract_root_ccs(result.tree) == ChviSolver().solve(
            example1, PruneMode.PARETO
        ).root

    def test_same_seed_same_tree(self, example1):
        first = _engine(example1, labelling=False).run_trials(SearchBudget(trials=200), *_rngs(9))
        second = _engine(example1, labelling=False).run_trials(SearchBudget(trials=200), *_rngs(9))
        assert first.stats.backups_performed == second.stats.backups_performed
        assert first.tree.root.value_set == second.tree.root.value_set

    def test_outcome_frequencies_follow_model(self, rng):
        """라벨링이 꺼져 있으면 s'는 T(s, a, ·) 그대로 뽑힘"""
        model = Momdp(
            num_states=3,
            num_actions=1,
            num_objectives=2,
            horizon=1,
            initial_state=0,
            terminals={1, 2},
            rewards={(0, 0): np.array([1.0, 0.0])},
            transitions={(0, 0): ((1, 0.99), (2, 0.01))},
        )
        engine = _engine(model, "hypervolume", labelling=False)
        chance = ChanceNode(state=0, action=0, depth=0, q_set=PointSet.zero(2))
        draws = np.array([engine.select_outcome(chance, rng)[0].state for _ in range(20000)])
        assert np.mean(draws == 2) == pytest.approx(0.01, abs=0.003)
        assert set(chance.children) == {1, 2}
        assert sum(child.visit_count for child in chance.children.values()) == 20000


@pytest.mark.unit
class TestTreePolicyEvaluator:
    """시행 정책의 정확한 가치 테스트"""

    def test_fresh_tree_truncates_after_first_step(self, example1):
        engine = _engine(example1, "chebychev", labelling=False)
        value = TreePolicyEvaluator(engine).evaluate(engine.new_tree(), np.array([0.5, 0.5]))
        # 확장되지 않은 행동 중 가장 작은 id → a0, 보상 (0, 4) 후 트리 밖
        assert value.tolist() == [0.0, 4.0]

    def test_matches_realized_return_on_deterministic_model(self, example1):
        """결정적 모델과 결정적 전략에서는 정확한 가치 = 실현 보상"""
        engine = _engine(example1, "chebychev", labelling=False)
        observer = ExactReturnObserver(engine)
        engine.run_trials(SearchBudget(trials=200), *_rngs(), observers=[observer])
        assert len(observer.pairs) == 200
        for exact, realized in observer.pairs:
            assert np.allclose(exact, realized)


@pytest.mark.unit
class TestSearchService:
    """search 서비스 테스트"""

    async def test_search_with_artifacts(self, run_context, tmp_path):
        request = SearchRequest(
            source=ModelSourceRequest(fixture="example1"),
            strategy="zooming",
            budget=SearchBudget(trials=5000),
            out=str(tmp_path / "search.json"),
            snapshot=str(tmp_path / "tree.json"),
            dump_balls=str(tmp_path / "balls.csv"),
            compare_exact=True,
        )
        result = await SearchService(run_context).execute(request)
        assert result.success
        response = result.data
        assert response.matches_exact is True
        assert response.front.points == [[6.0, 0.0], [0.0, 6.0]]
        assert response.stats["stop_reason"] == "solved"

        report = json.loads((tmp_path / "search.json").read_text())
        assert report["strategy"] == "zooming"
        assert (tmp_path / "tree.json").is_file()
        header = (tmp_path / "balls.csv").read_text().splitlines()[0]
        assert "radius" in header
        assert run_context.resolved["strategy"] == "zooming"

    async def test_dump_balls_requires_zooming(self, run_context, tmp_path):
        request = SearchRequest(
            source=ModelSourceRequest(fixture="example1"),
            strategy="hypervolume",
            budget=SearchBudget(trials=10),
            dump_balls=str(tmp_path / "balls.csv"),
        )
        result = await SearchService(run_context).execute(request)
        assert not result.success
        assert result.exit_code == 1

    async def test_zero_budget_is_runtime_error(self, run_context):
        request = SearchRequest(
            source=ModelSourceRequest(fixture="theorem1"), budget=SearchBudget(trials=0)
        )
        result = await SearchService(run_context).execute(request)
        assert not result.success
        assert result.exit_code == 2
