"""
MOMDP 도메인 단위 테스트

모델 조회, 불변식 검사, 시뮬레이션, 정책 평가, 모델 로딩을 검증합니다.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from chmcts.app.domain.chvi.calculators import ChviSolver, PolicyExtractor
from chmcts.app.domain.gdst.calculators import GdstGenerator
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.geometry.models import WeightVector
from chmcts.app.domain.momdp.calculators import (
    MomdpValidator,
    PolicyEvaluator,
    TrajectorySimulator,
)
from chmcts.app.domain.momdp.models import DeterministicPolicy, Momdp
from chmcts.app.domain.momdp.providers import FixtureProvider, MomdpFileProvider
from chmcts.app.domain.momdp.schemas import FixtureInput, ModelFileInput, ModelSourceRequest
from chmcts.app.domain.momdp.service import FixtureCatalogService, ModelLoadService
from chmcts.app.shared.exceptions import (
    EXIT_USAGE,
    BusinessLogicException,
    ModelException,
    UsageException,
    ValidationException,
)


def _broken_model() -> Momdp:
    """확률 합이 1이 아니고 전이가 빠진 모델"""
    return Momdp(
        num_states=3,
        num_actions=2,
        num_objectives=2,
        horizon=2,
        initial_state=0,
        terminals={2},
        rewards={(0, 0): np.array([1.0, 0.0]), (0, 1): np.array([1.0, 0.0, 0.0])},
        transitions={(0, 0): ((1, 0.5),), (0, 1): ((2, 1.0),), (1, 0): ((2, 1.0),)},
    )


@pytest.mark.unit
class TestMomdpModel:
    """모델 조회 테스트"""

    def test_example1_shape(self, example1):
        assert (example1.num_states, example1.num_actions, example1.horizon) == (6, 3, 2)
        assert example1.is_terminal(1)
        assert list(example1.actions(0)) == [0, 1, 2]
        assert list(example1.actions(4)) == []

    def test_reward_defaults_to_zero(self, example1):
        assert example1.reward(3, 0).tolist() == [6.0, 0.0]
        assert example1.reward(5, 0).tolist() == [0.0, 0.0]

    def test_reachable_states(self, example1):
        layers = [layer.tolist() for layer in example1.reachable_states]
        assert layers == [[0], [1, 2, 3], [3, 4, 5]]

    def test_metadata(self, example1):
        assert example1.hypervolume_reference.tolist() == [0.0, 0.0]
        assert example1.return_bound_at(0) == 6.0

    def test_return_bound_without_metadata(self, example1):
        model = example1.replace(return_bound=None, arrival_rewards={}, terminal_bonus=None)
        assert model.return_bound_at(0) == pytest.approx(2 * 6.0)
        assert model.return_bound_at(1) == pytest.approx(6.0)

    def test_terminal_bonus_scales_with_remaining_time(self, example1):
        model = example1.replace(terminal_bonus=np.array([0.0, 2.0]))
        assert model.arrival_bonus(1, 0).tolist() == [0.0, 1.0]
        assert model.arrival_bonus(4, 1).tolist() == [0.0, 0.0]
        assert model.arrival_bonus(3, 0) is None
        assert model.step_reward(0, 0, 1, 0).tolist() == [0.0, 5.0]

    def test_sample_transition(self, example1, rng):
        assert example1.sample_transition(0, 2, rng) == 3
        with pytest.raises(BusinessLogicException):
            example1.sample_transition(1, 0, rng)

    def test_sample_transition_frequencies(self, rng):
        model = Momdp(
            num_states=3,
            num_actions=1,
            num_objectives=1,
            horizon=1,
            initial_state=0,
            terminals={1, 2},
            rewards={},
            transitions={(0, 0): ((1, 0.25), (2, 0.75))},
        )
        draws = [model.sample_transition(0, 0, rng) for _ in range(4000)]
        assert np.mean(np.asarray(draws) == 2) == pytest.approx(0.75, abs=0.03)


@pytest.mark.unit
class TestMomdpValidator:
    """불변식 검사 테스트"""

    def test_fixtures_are_valid(self, example1, theorem1):
        assert MomdpValidator().validate(example1) == []
        assert MomdpValidator().validate(theorem1) == []

    def test_reports_every_violation(self):
        violations = MomdpValidator().validate(_broken_model())
        kinds = {(v.kind, v.state, v.action) for v in violations}
        assert ("probability", 0, 0) in kinds
        assert ("dimension", 0, 1) in kinds
        assert ("transition", 1, 1) in kinds


@pytest.mark.unit
class TestPolicies:
    """정책 시뮬레이션과 정확한 평가 테스트"""

    def test_policy_evaluator(self, example1):
        policy = DeterministicPolicy.empty(example1.num_states, example1.horizon)
        policy.assign(0, 0, 2)
        policy.assign(3, 1, 1)
        assert PolicyEvaluator(example1).evaluate(policy).tolist() == [0.0, 6.0]

    def test_policy_evaluator_needs_reachable_entries(self, example1):
        policy = DeterministicPolicy.empty(example1.num_states, example1.horizon)
        policy.assign(0, 0, 2)
        with pytest.raises(ValidationException):
            PolicyEvaluator(example1).evaluate(policy)

    def test_simulator_stops_at_terminal(self, example1, rng):
        trajectory = TrajectorySimulator(example1).simulate(
            lambda s, t, w: 0, np.array([0.5, 0.5]), rng
        )
        assert len(trajectory) == 1
        assert trajectory.cumulative_return == (0.0, 4.0)

    def test_simulate_deterministic_policy(self, example1, rng):
        policy = DeterministicPolicy.empty(example1.num_states, example1.horizon)
        policy.assign(0, 0, 2)
        policy.assign(3, 1, 0)
        trajectory = TrajectorySimulator(example1).simulate(
            policy.as_callback(), np.array([0.5, 0.5]), rng
        )
        assert len(trajectory) == 2
        assert trajectory.cumulative_return == (6.0, 0.0)

    def test_simulator_rejects_illegal_action(self, example1, rng):
        with pytest.raises(ValidationException) as exc_info:
            TrajectorySimulator(example1).simulate(lambda s, t, w: 7, np.array([1.0, 0.0]), rng)
        assert exc_info.value.details["step"] == 0

    def _stochastic_policy(self):
        """해류가 있는 GDST와 그 위에서 CHVI로 뽑은 w = (0.4, 0.6) 정책"""
        config = GdstConfig(columns=3, noise=0.2, seed=2, horizon=8)
        model = GdstGenerator().generate(config).model
        solution = ChviSolver().solve(model)
        return model, PolicyExtractor(solution).extract(WeightVector([0.4, 0.6]))

    def test_evaluator_matches_backward_recursion(self):
        model, policy = self._stochastic_policy()
        zero = np.zeros(model.num_objectives)
        following: dict[int, np.ndarray] = {}
        for t in reversed(range(model.horizon)):
            current: dict[int, np.ndarray] = {}
            for state in model.reachable_states[t].tolist():
                if model.is_terminal(state):
                    continue
                action = policy.action(state, t)
                current[state] = sum(
                    (
                        p * (model.step_reward(state, action, s2, t) + following.get(s2, zero))
                        for s2, p in model.successors(state, action)
                    ),
                    zero,
                )
            following = current
        expected = following[model.initial_state]
        assert PolicyEvaluator(model).evaluate(policy) == pytest.approx(expected, abs=1e-9)

    def test_simulated_mean_converges_to_evaluation(self, rng):
        model, policy = self._stochastic_policy()
        simulator = TrajectorySimulator(model)
        callback = policy.as_callback()
        weights = np.array([0.4, 0.6])
        returns = np.array(
            [simulator.simulate(callback, weights, rng).cumulative_return for _ in range(4000)]
        )
        expected = PolicyEvaluator(model).evaluate(policy)
        assert returns.mean(axis=0) == pytest.approx(expected, abs=0.03)


@pytest.mark.unit
class TestModelProviders:
    """모델 파일 / fixture Provider 테스트"""

    def test_fixture_names(self):
        names = FixtureProvider().names()
        assert {"example1", "theorem1"} <= set(names)

    def test_unknown_fixture(self):
        with pytest.raises(UsageException):
            FixtureProvider().path_of("nope")

    async def test_provide_fixture(self):
        output = await FixtureProvider().provide(FixtureInput(name="theorem1"))
        assert output.source == "fixture:theorem1"
        assert output.model.num_states == 3

    async def test_invalid_model_file(self, tmp_path):
        """불변식 위반은 ModelException (종료 코드 1)"""
        raw = json.loads(FixtureProvider().path_of("example1").read_text())
        raw["transitions"][0]["successors"][0]["p"] = 0.5
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(raw))

        with pytest.raises(ModelException) as exc_info:
            await MomdpFileProvider().provide(ModelFileInput(path=str(path)))
        assert exc_info.value.exit_code == EXIT_USAGE

    async def test_schema_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"num_states": "many"}))
        with pytest.raises(ValidationException):
            await MomdpFileProvider().provide(ModelFileInput(path=str(path)))


@pytest.mark.unit
class TestModelServices:
    """모델 로드 / fixture 목록 서비스 테스트"""

    def test_source_needs_exactly_one(self):
        with pytest.raises(ValidationError):
            ModelSourceRequest(fixture="example1", path="x.json")
        with pytest.raises(ValidationError):
            ModelSourceRequest()

    async def test_load_records_source(self, run_context):
        model = await ModelLoadService(run_context).load(ModelSourceRequest(fixture="example1"))
        assert model.name == "example1"
        assert run_context.resolved["model_source"] == "fixture:example1"

    async def test_catalog_listing(self, run_context):
        result = await FixtureCatalogService(run_context).execute(None)
        assert result.success
        assert {entry.name for entry in result.data} >= {"example1", "theorem1"}

    async def test_catalog_export_round_trip(self, run_context, tmp_path):
        out = tmp_path / "exported.json"
        result = await FixtureCatalogService(run_context).execute("example1", out_path=out)
        assert result.success
        assert result.data[0].path == str(out)

        reloaded = await MomdpFileProvider().provide(ModelFileInput(path=str(out)))
        assert reloaded.model.num_states == 6
        assert reloaded.model.reward(3, 1).tolist() == [0.0, 6.0]

    async def test_catalog_unknown_name(self, run_context):
        result = await FixtureCatalogService(run_context).execute("missing")
        assert not result.success
        assert result.exit_code == EXIT_USAGE
