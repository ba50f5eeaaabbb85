"""
Evaluation 도메인 단위 테스트

후회 지표, 관찰자, 반복 실행 작업, 집계, CSV 출력, 실험 설정 해석을 검증합니다.
"""

import numpy as np
import pytest

from chmcts.app.domain.chvi.calculators import ChviSolver
from chmcts.app.domain.gdst.calculators import GdstGenerator, ShortestPathOracle
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.geometry.models import PointSet
from chmcts.app.domain.momdp.models import DeterministicPolicy
from chmcts.app.domain.evaluation.calculators import (
    CheckpointObserver,
    OfflineReplicationRunner,
    RegretObserver,
    RegretReplicationRunner,
    RegretSummaryCalculator,
    ScaleReplicationRunner,
    ScaleSummaryCalculator,
    checked_ratio,
    lcr_per_trial,
    pareto_gap,
    pareto_regret,
)
from chmcts.app.domain.evaluation.formatters import RegretCSVFormatter, ScaleCSVFormatter
from chmcts.app.domain.evaluation.models import (
    ExperimentKind,
    RegretCurve,
    RegretEstimator,
    ScaleRow,
    TrialRecord,
)
from chmcts.app.domain.evaluation.providers import ExperimentConfigProvider
from chmcts.app.domain.evaluation.schemas import (
    ExperimentOverrides,
    OfflineJob,
    RegretJob,
    RegretSummaryInput,
    RegretTableInput,
    ScaleJob,
    ScaleSummaryInput,
    ScaleTableInput,
)
from chmcts.app.shared.exceptions import EXIT_USAGE, NotFoundException, ValidationException

# 모든 보물이 1행에 있어 지평 4 안에 세 보물 모두 닿는 작은 인스턴스
FLAT_GDST = GdstConfig(columns=3, depth_increments=[0, 0], treasure_values=[1, 5, 6], horizon=4)


def _record(trial: int, regret: float, w0: float = 0.5) -> TrialRecord:
    return TrialRecord(
        trial=trial,
        weights=[w0, 1.0 - w0],
        realized_return=[0.0, 0.0],
        value_estimate=0.0,
        regret=regret,
    )


def _regret_job(model, strategy: str, trials: int, **overrides) -> RegretJob:
    return RegretJob(
        model=model,
        true_ccs=ChviSolver().true_ccs(model),
        strategy=strategy,
        replication=overrides.pop("replication", 0),
        trials=trials,
        master_seed=overrides.pop("master_seed", 11),
        **overrides,
    )


# ====================
# Metrics
# ====================


@pytest.mark.unit
class TestRegretMetrics:
    """LCR과 Pareto 간격 테스트"""

    def test_lcr_against_vector(self):
        ccs = PointSet([(1, 0), (0, 1)])
        assert lcr_per_trial(ccs, [0.3, 0.7], [1.0, 0.0]) == pytest.approx(0.4)
        assert lcr_per_trial(ccs, [0.3, 0.7], [0.0, 1.0]) == pytest.approx(0.0)

    def test_lcr_against_policy(self, example1):
        policy = DeterministicPolicy.empty(example1.num_states, example1.horizon)
        policy.assign(0, 0, 0)
        ccs = ChviSolver().true_ccs(example1)
        # a0의 가치 (0, 4), 최선 max(6w, 6(1−w))
        assert lcr_per_trial(ccs, [0.5, 0.5], policy, example1) == pytest.approx(1.0)
        with pytest.raises(ValidationException):
            lcr_per_trial(ccs, [0.5, 0.5], policy)

    def test_lcr_needs_front(self):
        with pytest.raises(ValidationException):
            lcr_per_trial(PointSet([], dimension=2), [0.5, 0.5], [0.0, 0.0])

    def test_pareto_gap(self):
        front = PointSet([(0, 1), (1, 0)])
        assert pareto_gap((0.0, 0.0), front) == 0.0
        assert pareto_gap((0.5, 0.5), PointSet([(1, 1)])) == pytest.approx(0.5)
        assert pareto_gap((2.0, 2.0), PointSet([(1, 1)])) == 0.0

    def test_pareto_regret_sums_gaps(self):
        front = PointSet([(1, 1)])
        assert pareto_regret([(0.5, 0.5), (0.75, 0.0), (1.0, 1.0)], front) == pytest.approx(0.5)


# ====================
# Curves and Observers
# ====================


@pytest.mark.unit
class TestRegretCurve:
    """후회 곡선 모델 테스트"""

    def test_from_records(self):
        curve = RegretCurve.from_records(
            "zooming", 0, RegretEstimator.REALIZED, [_record(k, 0.5) for k in range(20)]
        )
        assert curve.trials == 20
        assert curve.final_regret == pytest.approx(10.0)
        assert curve.cumulative[4] == pytest.approx(2.5)
        assert curve.context_w0 == [0.5] * 20

    def test_records_must_be_sequential(self):
        with pytest.raises(ValueError):
            RegretCurve.from_records(
                "zooming", 0, RegretEstimator.REALIZED, [_record(0, 0.1), _record(2, 0.1)]
            )

    def test_decile_means(self):
        regrets = [1.0] * 10 + [0.5] * 80 + [0.0] * 10
        curve = RegretCurve.from_records(
            "zooming",
            0,
            RegretEstimator.EXACT,
            [_record(k, r) for k, r in enumerate(regrets)],
        )
        assert curve.decile_means() == (1.0, 0.0)

    def test_empty_curve(self):
        curve = RegretCurve(strategy="zooming", replication=0, estimator=RegretEstimator.EXACT)
        assert curve.final_regret == 0.0
        assert curve.decile_means() == (0.0, 0.0)


@pytest.mark.unit
class TestObservers:
    """관찰자 테스트"""

    def test_exact_estimator_needs_evaluator(self):
        with pytest.raises(ValidationException):
            RegretObserver(PointSet([(1, 0)]), RegretEstimator.EXACT)

    @pytest.mark.parametrize(
        "budget, count, expected",
        [(100, 4, [25, 50, 75, 100]), (3, 10, [1, 2, 3]), (0, 5, [])],
    )
    def test_schedule(self, budget, count, expected):
        assert CheckpointObserver.schedule_for(budget, count) == expected

    def test_checked_ratio_clamps(self):
        assert checked_ratio(0.5, 1.0, "test") == 0.5
        assert checked_ratio(2.0, 1.0, "test") == pytest.approx(1.0 + 1e-9)
        assert checked_ratio(-1.0, 1.0, "test") == 0.0


# ====================
# Replication Runners
# ====================


@pytest.mark.unit
class TestRegretReplicationRunner:
    """온라인 후회 실행 테스트"""

    def test_context_free_strategy_has_quarter_regret(self, theorem1):
        """두 팔 모두 하이퍼볼륨 0이라 선택이 w와 무관 → 평균 시행별 후회 E[max(0, 1 − 2w)] = 1/4"""
        curve = RegretReplicationRunner.run_job(_regret_job(theorem1, "hypervolume", 20000))
        assert curve.trials == 20000
        assert curve.final_regret / curve.trials == pytest.approx(0.25, abs=0.02)
        assert min(curve.per_trial) >= 0.0

    def test_exact_estimator(self, theorem1):
        curve = RegretReplicationRunner.run_job(
            _regret_job(theorem1, "hypervolume", 5000, estimator=RegretEstimator.EXACT)
        )
        assert curve.estimator is RegretEstimator.EXACT
        assert curve.final_regret / curve.trials == pytest.approx(0.25, abs=0.02)

    def test_zero_trials(self, theorem1):
        curve = RegretReplicationRunner.run_job(_regret_job(theorem1, "zooming", 0))
        assert curve.trials == 0
        assert curve.final_regret == 0.0

    def test_strategies_share_contexts(self, example1):
        """같은 반복의 전략들은 같은 맥락 가중치 열을 봄"""
        first = RegretReplicationRunner.run_job(_regret_job(example1, "zooming", 50))
        second = RegretReplicationRunner.run_job(_regret_job(example1, "pareto-ucb", 50))
        other = RegretReplicationRunner.run_job(_regret_job(example1, "zooming", 50, replication=1))
        assert first.context_w0 == second.context_w0
        assert first.context_w0 != other.context_w0

    def test_same_seed_same_curve(self, example1):
        job = _regret_job(example1, "chebychev", 200)
        first, second = RegretReplicationRunner.run_job(job), RegretReplicationRunner.run_job(job)
        assert first.per_trial == second.per_trial
        assert first.context_w0 == second.context_w0

    @pytest.mark.slow
    def test_zooming_learns_the_context(self, theorem1):
        """CZT는 w에 따라 팔을 고르므로 마지막 10⁴ 시행의 후회가 작음"""
        curve = RegretReplicationRunner.run_job(_regret_job(theorem1, "zooming", 100000))
        assert float(np.mean(curve.per_trial[-10000:])) < 0.05

    def test_realized_and_exact_estimators_agree_on_average(self):
        """같은 시드에서 실현 후회의 평균은 정확한 후회의 평균에 수렴"""
        model = GdstGenerator().generate(FLAT_GDST.model_copy(update={"noise": 0.1})).model
        realized = RegretReplicationRunner.run_job(_regret_job(model, "zooming", 3000))
        exact = RegretReplicationRunner.run_job(
            _regret_job(model, "zooming", 3000, estimator=RegretEstimator.EXACT)
        )
        assert realized.context_w0 == exact.context_w0
        gap = float(np.mean(realized.per_trial)) - float(np.mean(exact.per_trial))
        assert abs(gap) < 0.05


@pytest.mark.unit
class TestOfflineReplicationRunner:
    """하이퍼볼륨-백업 실행 테스트"""

    def test_labelling_completes_small_instance(self):
        model = GdstGenerator().generate(FLAT_GDST).model
        run = OfflineReplicationRunner.run_job(
            OfflineJob(
                model=model,
                strategy="zooming",
                replication=0,
                backup_budget=20000,
                master_seed=3,
                checkpoints=10,
            )
        )
        assert [c.backups for c in run.checkpoints] == CheckpointObserver.schedule_for(20000, 10)
        assert run.stats["stop_reason"] == "solved"
        expected = ChviSolver().true_ccs(model).hypervolume(model.hypervolume_reference)
        assert run.checkpoints[-1].hypervolume == pytest.approx(expected, abs=1e-9)

    def test_zero_budget(self, example1):
        run = OfflineReplicationRunner.run_job(
            OfflineJob(
                model=example1,
                strategy="zooming",
                replication=0,
                backup_budget=0,
                master_seed=0,
                checkpoints=5,
            )
        )
        assert run.checkpoints == []


@pytest.mark.unit
class TestScaleReplicationRunner:
    """하이퍼볼륨 비율 실행 테스트"""

    def _reference(self) -> float:
        instance = GdstGenerator().generate(FLAT_GDST)
        return ShortestPathOracle(instance).front().hypervolume(
            instance.model.hypervolume_reference
        )

    def test_complete_search_has_unit_ratio(self):
        row = ScaleReplicationRunner.run_job(
            ScaleJob(
                gdst=FLAT_GDST,
                reference_hypervolume=self._reference(),
                strategy="zooming",
                replication=0,
                backup_budget=20000,
                master_seed=0,
            )
        )
        assert row.columns == 3
        assert row.ratio == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("strategy", ["hypervolume", "chebychev", "pareto-ucb"])
    def test_ratio_within_bounds(self, strategy):
        noisy = FLAT_GDST.model_copy(update={"noise": 0.1})
        row = ScaleReplicationRunner.run_job(
            ScaleJob(
                gdst=noisy,
                reference_hypervolume=self._reference(),
                strategy=strategy,
                replication=1,
                backup_budget=300,
                master_seed=0,
            )
        )
        assert 0.0 <= row.ratio <= 1.0 + 1e-9
        assert row.noise == 0.1


# ====================
# Summaries and Tables
# ====================


@pytest.mark.unit
class TestSummaries:
    """반복 실행 집계 테스트"""

    async def test_regret_summary(self):
        curves = [
            RegretCurve.from_records(
                "zooming",
                rep,
                RegretEstimator.REALIZED,
                [_record(k, value) for k in range(10)],
            )
            for rep, value in enumerate([0.1, 0.3])
        ]
        output = await RegretSummaryCalculator().calculate(RegretSummaryInput(curves=curves))
        (summary,) = output.summaries
        assert summary.replications == 2
        assert summary.final_regret_mean == pytest.approx(2.0)
        low, high = summary.final_regret_ci
        assert low < 2.0 < high
        assert summary.mean_per_trial == pytest.approx(0.2)
        assert summary.decile_ratio == pytest.approx(1.0)
        (series,) = output.series
        assert series.x[0] == 1.0
        assert series.y[-1] == pytest.approx(2.0)

    async def test_scale_summary_series(self):
        rows = [
            ScaleRow(columns=c, noise=0.0, strategy="zooming", ratio=r, replication=0)
            for c, r in [(4, 0.8), (3, 1.0)]
        ]
        output = await ScaleSummaryCalculator().calculate(ScaleSummaryInput(rows=rows))
        assert [s.columns for s in output.summaries] == [3, 4]
        (series,) = output.series
        assert series.label == "zooming p=0"
        assert series.x == [3.0, 4.0]
        assert series.y == [1.0, 0.8]


@pytest.mark.unit
class TestTables:
    """CSV 출력 테스트"""

    async def test_regret_csv(self):
        curve = RegretCurve.from_records(
            "zooming",
            0,
            RegretEstimator.REALIZED,
            [_record(0, 0.5, w0=0.25), _record(1, 0.25, w0=0.75)],
        )
        output = await RegretCSVFormatter().format(RegretTableInput(curves=[curve]))
        assert output.content.splitlines() == [
            "trial,strategy,replication,context_w0,cum_regret",
            "1,zooming,0,0.25,0.5",
            "2,zooming,0,0.75,0.75",
        ]

    async def test_scale_csv_sorted(self):
        rows = [
            ScaleRow(columns=4, noise=0.01, strategy="zooming", ratio=0.5, replication=0),
            ScaleRow(columns=3, noise=0.0, strategy="chvi", ratio=1.0, replication=0),
        ]
        output = await ScaleCSVFormatter().format(ScaleTableInput(rows=rows))
        assert output.content.splitlines()[1:] == [
            "3,0.0,chvi,1.0,0",
            "4,0.01,zooming,0.5,0",
        ]


# ====================
# Experiment Config
# ====================


@pytest.mark.unit
class TestExperimentConfigProvider:
    """실험 설정 해석 테스트"""

    async def test_flags_only(self):
        config = await ExperimentConfigProvider().resolve_config(
            ExperimentKind.REGRET,
            None,
            ExperimentOverrides(fixture="theorem1", trials=100, strategies=["zooming"]),
        )
        assert config.fixture == "theorem1"
        assert config.source.fixture == "theorem1"
        assert config.replications == 1

    async def test_overrides_replace_target(self, tmp_path):
        path = tmp_path / "regret.json"
        path.write_text(
            '{"experiment": "regret", "instance": {"columns": 5}, "trials": 10, '
            '"replications": 3}'
        )
        config = await ExperimentConfigProvider().resolve_config(
            ExperimentKind.REGRET,
            str(path),
            ExperimentOverrides(fixture="example1", trials=50),
        )
        assert config.instance is None
        assert config.fixture == "example1"
        assert (config.trials, config.replications) == (50, 3)

    async def test_missing_file(self, tmp_path):
        with pytest.raises(NotFoundException) as exc_info:
            await ExperimentConfigProvider().resolve_config(
                ExperimentKind.REGRET, str(tmp_path / "missing.json"), ExperimentOverrides()
            )
        assert exc_info.value.exit_code == EXIT_USAGE

    async def test_wrong_experiment_kind(self, tmp_path):
        path = tmp_path / "offline.json"
        path.write_text('{"experiment": "offline", "fixture": "example1", "backup_budget": 10}')
        with pytest.raises(ValidationException):
            await ExperimentConfigProvider().resolve_config(
                ExperimentKind.REGRET, str(path), ExperimentOverrides()
            )

    @pytest.mark.parametrize(
        "kind, overrides",
        [
            (ExperimentKind.REGRET, {"fixture": "example1"}),
            (ExperimentKind.OFFLINE, {"fixture": "example1", "trials": 5}),
            (ExperimentKind.SCALE, {"backup_budget": 10}),
            (ExperimentKind.SCALE, {"columns": [3], "backup_budget": 10, "noises": [2.0]}),
        ],
    )
    async def test_incomplete_configs(self, kind, overrides):
        with pytest.raises(ValidationException):
            await ExperimentConfigProvider().resolve_config(
                kind, None, ExperimentOverrides(**overrides)
            )
