"""
CHVI 단위 테스트

정확한 풀이, 표 관리, 정책 추출, 풀이 서비스를 검증합니다.
"""

import json

import numpy as np
import pytest

from chmcts.app.domain.chvi.calculators import ChviSolver, PolicyExtractor
from chmcts.app.domain.chvi.schemas import SolveRequest
from chmcts.app.domain.chvi.service import ChviService
from chmcts.app.domain.gdst.calculators import GdstGenerator, ShortestPathOracle
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.geometry.models import PointSet, PruneMode, WeightVector
from chmcts.app.domain.momdp.calculators import PolicyEvaluator
from chmcts.app.domain.momdp.schemas import ModelSourceRequest
from chmcts.app.shared.exceptions import BusinessLogicException, ValidationException


@pytest.mark.unit
class TestChviSolver:
    """CHVI 풀이 테스트"""

    def test_example1_front(self, example1):
        solution = ChviSolver().solve(example1)
        assert solution.root == PointSet([(0, 6), (6, 0)])
        # t=1의 s3, t=0의 s0: 각각 𝒬 세 번 + 𝒱 한 번
        assert solution.backup_count == 8
        assert solution.backup_count <= ChviSolver.max_backups(example1)

    def test_pareto_mode_matches_on_example1(self, example1):
        assert ChviSolver().solve(example1, PruneMode.PARETO).root == PointSet([(0, 6), (6, 0)])

    def test_theorem1_front(self, theorem1):
        assert ChviSolver().true_ccs(theorem1) == PointSet([(1, 0), (0, 1)])

    def test_value_tables(self, example1):
        solution = ChviSolver().solve(example1, keep_q_sets=True)
        assert solution.value(3, 1) == PointSet([(6, 0), (0, 6)])
        assert solution.value(4, 1) == PointSet.zero(2)
        assert solution.value(3, 2) == PointSet.zero(2)
        assert solution.q_set(0, 0, 0) == PointSet([(0, 4)])
        with pytest.raises(ValidationException):
            solution.value(2, 0)

    def test_dropped_tables(self, example1):
        solution = ChviSolver().solve(example1, keep_tables=False)
        assert solution.root == PointSet([(0, 6), (6, 0)])
        assert solution.q_set(0, 0, 0) is None
        with pytest.raises(ValidationException):
            solution.value(3, 1)

    def test_table_limit(self, example1):
        with pytest.raises(BusinessLogicException):
            ChviSolver().solve(example1, max_table=5)

    def test_stochastic_expectation(self, example1):
        """반반 확률 전이는 후속 집합의 Minkowski 기대값"""
        transitions = dict(example1.transitions)
        transitions[(0, 2)] = ((1, 0.5), (3, 0.5))
        model = example1.replace(transitions=transitions)
        root = ChviSolver().solve(model).root
        # a0 → (0, 4), a1 → (4, 0), a2 → ½·0 + ½·{(6, 0), (0, 6)} = {(3, 0), (0, 3)}
        assert root == PointSet([(4, 0), (0, 4)])

    @pytest.mark.parametrize("columns", [3, 4, 5, 6, 7])
    def test_matches_shortest_path_oracle(self, columns):
        """결정적 GDST에서 CHVI 정답은 BFS 전선과 같음"""
        instance = GdstGenerator().generate(GdstConfig(columns=columns, seed=columns, horizon=30))
        root = ChviSolver().true_ccs(instance.model)
        assert root.allclose(ShortestPathOracle(instance).front())


@pytest.mark.unit
class TestPolicyExtractor:
    """선형 최적 정책 추출 테스트"""

    @pytest.mark.parametrize(
        "weights, expected",
        [([0.5, 0.5], [6.0, 0.0]), ([0.2, 0.8], [0.0, 6.0]), ([0.9, 0.1], [6.0, 0.0])],
    )
    def test_extracted_policy_value(self, example1, weights, expected):
        solution = ChviSolver().solve(example1)
        policy = PolicyExtractor(solution).extract(WeightVector(weights))
        assert policy.action(0, 0) == 2
        assert PolicyEvaluator(example1).evaluate(policy).tolist() == expected

    def test_extracted_value_is_front_maximum(self, example1):
        solution = ChviSolver().solve(example1)
        extractor = PolicyExtractor(solution)
        for w in np.linspace(0.0, 1.0, 11):
            weights = np.array([w, 1.0 - w])
            _, best = extractor.best_action(0, 0, weights)
            assert best == pytest.approx(max(6 * w, 6 * (1 - w)))


@pytest.mark.unit
class TestChviService:
    """solve 서비스 테스트"""

    async def test_solve_writes_output(self, run_context, tmp_path):
        out = tmp_path / "solution.json"
        result = await ChviService(run_context).execute(
            SolveRequest(
                source=ModelSourceRequest(fixture="example1"),
                out=str(out),
                weights=[0.3, 0.7],
            )
        )
        assert result.success
        response = result.data
        assert response.backup_count == 8
        assert response.front.points == [[6.0, 0.0], [0.0, 6.0]]
        assert response.policy.policy_value == [0.0, 6.0]
        assert response.policy.scalarized_value == pytest.approx(4.2)

        document = json.loads(out.read_text())
        assert document["root_ccs"] == [[6.0, 0.0], [0.0, 6.0]]
        assert document["policy"]["root_actions"] == [2]
        assert run_context.resolved["prune"] == "ccs"

    async def test_invalid_weights_fail(self, run_context):
        result = await ChviService(run_context).execute(
            SolveRequest(source=ModelSourceRequest(fixture="example1"), weights=[0.5, 0.7])
        )
        assert not result.success
        assert result.exit_code == 1
