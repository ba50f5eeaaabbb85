"""
Evaluation Domain Calculators

- lcr_per_trial / pareto_gap / pareto_regret: 후회 지표
- RegretObserver / CheckpointObserver: 시행 관찰자
- *ReplicationRunner: 워커 프로세스에서 실행하는 반복 실행 하나 (피클 가능한 정적 메서드)
- *SummaryCalculator: 반복 실행 집계 (평균, 95% 정규 근사 신뢰구간)
"""

from collections import defaultdict
from typing import Sequence

import numpy as np

from chmcts.app.core.context import SeedStreams, StreamPurpose
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import StatisticsCalculator
from chmcts.app.shared.exceptions import ValidationException
from chmcts.app.shared.types import Vector
from chmcts.app.domain.geometry.calculators import Scalarization
from chmcts.app.domain.geometry.models import PointSet, WeightVector, as_weights
from chmcts.app.domain.momdp.calculators import PolicyEvaluator
from chmcts.app.domain.momdp.models import DeterministicPolicy, Momdp
from chmcts.app.domain.gdst.calculators import GdstGenerator
from chmcts.app.domain.search.calculators import ThtsEngine, TreePolicyEvaluator, TrialObserver
from chmcts.app.domain.search.models import (
    SearchBudget,
    SearchConfig,
    SearchStats,
    SearchTree,
    TrialOutcome,
)
from chmcts.app.domain.selection.calculators import StrategyFactory
from chmcts.app.domain.evaluation.models import (
    OfflineCheckpoint,
    OfflineRun,
    RegretCurve,
    RegretEstimator,
    ScaleRow,
    TrialRecord,
)
from chmcts.app.domain.evaluation.schemas import (
    ChartSeries,
    OfflineJob,
    OfflineSummary,
    OfflineSummaryInput,
    OfflineSummaryOutput,
    RegretJob,
    RegretSummary,
    RegretSummaryInput,
    RegretSummaryOutput,
    ScaleJob,
    ScaleSummary,
    ScaleSummaryInput,
    ScaleSummaryOutput,
)

logger = get_logger(__name__)

RATIO_TOLERANCE = 1e-9
CHART_POINTS = 400


# ====================
# Regret Metrics
# ====================


def lcr_per_trial(
    true_ccs: PointSet,
    weights: WeightVector | Sequence[float] | Vector,
    achieved: Sequence[float] | Vector | DeterministicPolicy,
    model: Momdp | None = None,
) -> float:
    """
    max_{p ∈ CCS} wᵀp − wᵀV

    achieved가 정책이면 model로 정확히 평가한 가치를, 벡터면 그 값을 씁니다.

    Raises:
        ValidationException: CCS가 비었거나 정책 평가에 model이 없을 때
    """
    if true_ccs.is_empty():
        raise ValidationException("lcr_per_trial requires a nonempty CCS")
    if isinstance(achieved, DeterministicPolicy):
        if model is None:
            raise ValidationException("Evaluating a policy for regret needs the model")
        value = PolicyEvaluator(model).evaluate(achieved)
    else:
        value = np.asarray(achieved, dtype=np.float64)
    w = as_weights(weights)
    _, best = Scalarization.max_scalarized(true_ccs, w)
    return best - Scalarization.linear(value, w)


def pareto_gap(value: Sequence[float] | Vector, front: PointSet) -> float:
    """
    Δ(V) = max(0, max_q min_i (q_i − V_i))

    V + Δ·1이 어떤 전선 점에도 강하게 지배되지 않는 가장 작은 균일 이동량입니다.

    Raises:
        ValidationException: 전선이 비었을 때
    """
    if front.is_empty():
        raise ValidationException("pareto_gap requires a nonempty front")
    v = np.asarray(value, dtype=np.float64)
    gaps = (front.points - v).min(axis=1)
    return max(0.0, float(gaps.max()))


def pareto_regret(values: Sequence[Sequence[float] | Vector], front: PointSet) -> float:
    """시행별 정책 가치들의 Δ 합."""
    if front.is_empty():
        raise ValidationException("pareto_regret requires a nonempty front")
    return float(sum(pareto_gap(v, front) for v in values))


# ====================
# Observers
# ====================


class RegretObserver(TrialObserver):
    """
    시행마다 TrialRecord를 남깁니다.

    exact 추정은 시행을 시작하기 전 트리에서 따르는 정책을 평가하고,
    realized 추정은 시행이 끝난 뒤 실제 누적 보상을 씁니다.
    Pareto 간격은 정답 CCS 기준입니다.
    """

    def __init__(
        self,
        true_ccs: PointSet,
        estimator: RegretEstimator,
        evaluator: TreePolicyEvaluator | None = None,
    ):
        if estimator is RegretEstimator.EXACT and evaluator is None:
            raise ValidationException("The exact regret estimator needs a policy evaluator")
        self.true_ccs = true_ccs
        self.estimator = estimator
        self.evaluator = evaluator
        self.records: list[TrialRecord] = []
        self._policy_value: Vector | None = None

    def on_trial_start(self, trial: int, weights: Vector, tree: SearchTree) -> None:
        if self.evaluator is not None and self.estimator is RegretEstimator.EXACT:
            self._policy_value = self.evaluator.evaluate(tree, weights)

    def on_trial_end(self, outcome: TrialOutcome, tree: SearchTree, stats: SearchStats) -> None:
        if self.estimator is RegretEstimator.EXACT and self._policy_value is not None:
            value = self._policy_value
        else:
            value = outcome.realized_return
        weights = outcome.weights
        self.records.append(
            TrialRecord(
                trial=outcome.trial,
                weights=[float(x) for x in weights],
                realized_return=[float(x) for x in outcome.realized_return],
                value_estimate=float(weights @ value),
                regret=lcr_per_trial(self.true_ccs, weights, value),
                pareto_gap=pareto_gap(value, self.true_ccs),
            )
        )


class CheckpointObserver(TrialObserver):
    """
    예정된 백업 수마다 루트 하이퍼볼륨을 기록합니다.

    예정 지점을 처음 넘긴 시행이 끝난 뒤의 값을 그 지점의 값으로 씁니다.
    """

    def __init__(self, schedule: Sequence[int], reference: Vector):
        self.schedule = list(schedule)
        self.reference = np.asarray(reference, dtype=np.float64)
        self.checkpoints: list[OfflineCheckpoint] = []

    @staticmethod
    def schedule_for(budget: int, count: int) -> list[int]:
        """budget/count 간격의 정수 지점 (중복 제거, 마지막은 budget)."""
        if budget <= 0:
            return []
        points = np.rint(np.linspace(budget / count, budget, count)).astype(np.int64)
        return sorted({int(p) for p in points if p > 0})

    def on_trial_end(self, outcome: TrialOutcome, tree: SearchTree, stats: SearchStats) -> None:
        self.record_until(stats.backups_performed, tree)

    def record_until(self, backups: int, tree: SearchTree) -> None:
        hypervolume: float | None = None
        while len(self.checkpoints) < len(self.schedule):
            due = self.schedule[len(self.checkpoints)]
            if due > backups:
                break
            if hypervolume is None:
                hypervolume = tree.root.value_set.hypervolume(self.reference)
            self.checkpoints.append(OfflineCheckpoint(backups=due, hypervolume=hypervolume))

    def finish(self, tree: SearchTree) -> None:
        """탐색이 예산 전에 멈췄으면 (해결 또는 노드 상한) 남은 지점을 마지막 값으로 채웁니다."""
        if self.schedule:
            self.record_until(self.schedule[-1], tree)


# ====================
# Replication Runners
# ====================


def _engine(model: Momdp, strategy: str, exploration: float | None, config: SearchConfig):
    return ThtsEngine(model, StrategyFactory.create(strategy, model, exploration), config)


def checked_ratio(hypervolume: float, reference: float, label: str) -> float:
    """ehv / hv(c, 0). [0, 1 + 1e-9] 밖이면 경고하고 잘라냅니다."""
    ratio = hypervolume / reference
    if ratio < 0.0 or ratio > 1.0 + RATIO_TOLERANCE:
        logger.warning(f"Ratio {ratio!r} for {label} outside [0, 1]; clamping")
        ratio = min(max(ratio, 0.0), 1.0 + RATIO_TOLERANCE)
    return ratio


class RegretReplicationRunner:
    """
    (전략, 반복) 하나의 온라인 후회 실행

    라벨링은 끕니다. 맥락 가중치는 (replication, CONTEXTS) 스트림이라
    같은 반복의 모든 전략이 같은 w_k 열을 봅니다 (common random numbers).
    """

    @staticmethod
    def run_job(job: RegretJob) -> RegretCurve:
        if job.trials == 0:
            return RegretCurve(
                strategy=job.strategy, replication=job.replication, estimator=job.estimator
            )
        streams = SeedStreams(job.master_seed)
        engine = _engine(
            job.model,
            job.strategy,
            job.exploration,
            SearchConfig(prune_mode=job.prune, labelling=False),
        )
        evaluator = TreePolicyEvaluator(engine) if job.estimator is RegretEstimator.EXACT else None
        observer = RegretObserver(job.true_ccs, job.estimator, evaluator)
        result = engine.run_trials(
            SearchBudget(trials=job.trials),
            search_rng=streams.generator(job.replication, StreamPurpose.SEARCH),
            context_rng=streams.generator(job.replication, StreamPurpose.CONTEXTS),
            observers=[observer],
        )
        curve = RegretCurve.from_records(
            job.strategy,
            job.replication,
            job.estimator,
            observer.records,
            stats=result.stats.as_dict(),
        )
        logger.info(
            f"regret {job.strategy} rep {job.replication}: {curve.trials} trials, "
            f"cumulative LCR {curve.final_regret:.4f}",
            extra={"strategy": job.strategy, "replication": job.replication},
        )
        return curve


class OfflineReplicationRunner:
    """(전략, 반복) 하나의 하이퍼볼륨-백업 곡선. 라벨링을 켜고 백업 예산으로 탐색합니다."""

    @staticmethod
    def run_job(job: OfflineJob) -> OfflineRun:
        schedule = CheckpointObserver.schedule_for(job.backup_budget, job.checkpoints)
        if not schedule:
            return OfflineRun(strategy=job.strategy, replication=job.replication)
        streams = SeedStreams(job.master_seed)
        config = SearchConfig(prune_mode=job.prune)
        engine = _engine(job.model, job.strategy, job.exploration, config)
        observer = CheckpointObserver(schedule, job.model.hypervolume_reference)
        result = engine.run_trials(
            SearchBudget(backups=job.backup_budget),
            search_rng=streams.generator(job.replication, StreamPurpose.SEARCH),
            context_rng=streams.generator(job.replication, StreamPurpose.CONTEXTS),
            observers=[observer],
        )
        observer.finish(result.tree)
        logger.info(
            f"offline {job.strategy} rep {job.replication}: {result.stats.backups_performed} "
            f"backups ({result.stats.stop_reason}), final HV "
            f"{observer.checkpoints[-1].hypervolume:.6f}",
            extra={"strategy": job.strategy, "replication": job.replication},
        )
        return OfflineRun(
            strategy=job.strategy,
            replication=job.replication,
            checkpoints=observer.checkpoints,
            stats=result.stats.as_dict(),
        )


class ScaleReplicationRunner:
    """GDST(c, p) 하나에서 백업 예산 탐색 후 루트 하이퍼볼륨 비율."""

    @staticmethod
    def run_job(job: ScaleJob) -> ScaleRow:
        model = GdstGenerator().generate(job.gdst).model
        hypervolume = 0.0
        if job.backup_budget > 0:
            streams = SeedStreams(job.master_seed)
            config = SearchConfig(prune_mode=job.prune)
            engine = _engine(model, job.strategy, job.exploration, config)
            result = engine.run_trials(
                SearchBudget(backups=job.backup_budget),
                search_rng=streams.generator(job.replication, StreamPurpose.SEARCH),
                context_rng=streams.generator(job.replication, StreamPurpose.CONTEXTS),
            )
            hypervolume = result.tree.root.value_set.hypervolume(model.hypervolume_reference)
        label = f"{job.strategy} on {model.name} rep {job.replication}"
        ratio = checked_ratio(hypervolume, job.reference_hypervolume, label)
        logger.info(f"scale {label}: ratio {ratio:.6f}")
        return ScaleRow(
            columns=job.gdst.columns,
            noise=job.gdst.noise,
            strategy=job.strategy,
            ratio=ratio,
            replication=job.replication,
        )


# ====================
# Summaries
# ====================


def _chart_indices(length: int, limit: int = CHART_POINTS) -> np.ndarray:
    if length <= limit:
        return np.arange(length)
    return np.unique(np.linspace(0, length - 1, limit).astype(np.int64))


class RegretSummaryCalculator(StatisticsCalculator[RegretSummaryInput, RegretSummaryOutput]):
    """
    전략별 후회 집계

    - 최종 누적 후회의 평균과 95% 신뢰구간
    - 처음/마지막 10% 시행의 평균 시행별 후회와 그 비 (선형 후회면 1 근처)
    - 누적 후회 곡선의 평균 띠 (차트용, 반복 중 가장 짧은 길이에 맞춤)
    """

    async def calculate(self, input_data: RegretSummaryInput) -> RegretSummaryOutput:
        grouped: dict[str, list[RegretCurve]] = defaultdict(list)
        for curve in input_data.curves:
            grouped[curve.strategy].append(curve)

        summaries: list[RegretSummary] = []
        series: list[ChartSeries] = []
        for strategy, curves in grouped.items():
            curves.sort(key=lambda c: c.replication)
            finals = [c.final_regret for c in curves]
            deciles = [c.decile_means() for c in curves]
            first = self.calculate_mean([d[0] for d in deciles])
            last = self.calculate_mean([d[1] for d in deciles])
            trials = min(c.trials for c in curves)
            summaries.append(
                RegretSummary(
                    strategy=strategy,
                    replications=len(curves),
                    trials=trials,
                    final_regret_mean=self.calculate_mean(finals),
                    final_regret_ci=self.calculate_confidence_interval(finals),
                    mean_per_trial=self.calculate_mean(
                        [c.final_regret / c.trials for c in curves if c.trials]
                    ),
                    first_decile_mean=first,
                    last_decile_mean=last,
                    decile_ratio=(last / first) if first != 0.0 else None,
                    pareto_regret_mean=self.calculate_mean([c.pareto_regret for c in curves]),
                )
            )
            if trials > 0:
                matrix = np.vstack([c.cumulative[:trials] for c in curves])
                index = _chart_indices(trials)
                mean, lower, upper = self.calculate_band(matrix[:, index])
                series.append(
                    ChartSeries(
                        label=strategy,
                        x=(index + 1).astype(float).tolist(),
                        y=mean.tolist(),
                        lower=lower.tolist(),
                        upper=upper.tolist(),
                    )
                )
        return RegretSummaryOutput(summaries=summaries, series=series)


class OfflineSummaryCalculator(StatisticsCalculator[OfflineSummaryInput, OfflineSummaryOutput]):
    """전략별 최종 하이퍼볼륨 집계와 체크포인트별 평균 띠."""

    async def calculate(self, input_data: OfflineSummaryInput) -> OfflineSummaryOutput:
        grouped: dict[str, list[OfflineRun]] = defaultdict(list)
        for run in input_data.runs:
            grouped[run.strategy].append(run)

        summaries: list[OfflineSummary] = []
        series: list[ChartSeries] = []
        for strategy, runs in grouped.items():
            runs = [r for r in sorted(runs, key=lambda r: r.replication) if r.checkpoints]
            if not runs:
                continue
            finals = [r.checkpoints[-1].hypervolume for r in runs]
            summaries.append(
                OfflineSummary(
                    strategy=strategy,
                    replications=len(runs),
                    final_backups_mean=self.calculate_mean(
                        [float(r.checkpoints[-1].backups) for r in runs]
                    ),
                    final_hypervolume_mean=self.calculate_mean(finals),
                    final_hypervolume_ci=self.calculate_confidence_interval(finals),
                )
            )
            length = min(len(r.checkpoints) for r in runs)
            matrix = np.array([[c.hypervolume for c in r.checkpoints[:length]] for r in runs])
            mean, lower, upper = self.calculate_band(matrix)
            series.append(
                ChartSeries(
                    label=strategy,
                    x=[float(c.backups) for c in runs[0].checkpoints[:length]],
                    y=mean.tolist(),
                    lower=lower.tolist(),
                    upper=upper.tolist(),
                )
            )
        return OfflineSummaryOutput(summaries=summaries, series=series)


class ScaleSummaryCalculator(StatisticsCalculator[ScaleSummaryInput, ScaleSummaryOutput]):
    """(c, p, 전략)별 평균 비율과 (전략, p)별 열 수에 따른 시리즈."""

    async def calculate(self, input_data: ScaleSummaryInput) -> ScaleSummaryOutput:
        grouped: dict[tuple[int, float, str], list[float]] = defaultdict(list)
        for row in input_data.rows:
            grouped[(row.columns, row.noise, row.strategy)].append(row.ratio)

        summaries = [
            ScaleSummary(
                columns=columns,
                noise=noise,
                strategy=strategy,
                replications=len(ratios),
                ratio_mean=self.calculate_mean(ratios),
                ratio_ci=self.calculate_confidence_interval(ratios),
            )
            for (columns, noise, strategy), ratios in sorted(grouped.items())
        ]

        by_line: dict[tuple[str, float], list[ScaleSummary]] = defaultdict(list)
        for summary in summaries:
            by_line[(summary.strategy, summary.noise)].append(summary)
        series = [
            ChartSeries(
                label=f"{strategy} p={noise:g}",
                x=[float(s.columns) for s in points],
                y=[s.ratio_mean for s in points],
                lower=[s.ratio_ci[0] for s in points],
                upper=[s.ratio_ci[1] for s in points],
            )
            for (strategy, noise), points in sorted(by_line.items())
        ]
        return ScaleSummaryOutput(summaries=summaries, series=series)


__all__ = [
    "lcr_per_trial",
    "pareto_gap",
    "pareto_regret",
    "checked_ratio",
    "RegretObserver",
    "CheckpointObserver",
    "RegretReplicationRunner",
    "OfflineReplicationRunner",
    "ScaleReplicationRunner",
    "RegretSummaryCalculator",
    "OfflineSummaryCalculator",
    "ScaleSummaryCalculator",
]
