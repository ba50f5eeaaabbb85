"""
Evaluation Domain Service

bench-regret / bench-offline / bench-scale 명령의 흐름을 조율합니다.
    1. 설정 해석 (ExperimentConfigProvider: 파일 + CLI 덮어쓰기)
    2. 대상 모델 준비 (fixture / 모델 파일 / GDST 생성)
    3. 정답 계산 (CHVI 또는 BFS 오라클)
    4. (전략 × 반복) 작업을 워커 풀에서 실행 (BatchService.execute_batch)
    5. 집계 → CSV / 요약 JSON / SVG 저장
"""

from abc import abstractmethod
from pathlib import Path
from typing import Any, ClassVar

from chmcts.app.core.config import get_settings
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import ArtifactWriter, BatchService
from chmcts.app.shared.exceptions import BusinessLogicException, UsageException
from chmcts.app.shared.types import ArtifactInput, ServiceResult
from chmcts.app.domain.geometry.models import PruneMode
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.service import ModelLoadService
from chmcts.app.domain.chvi.calculators import ChviSolver
from chmcts.app.domain.gdst.calculators import GdstGenerator, ShortestPathOracle
from chmcts.app.domain.gdst.service import GdstService
from chmcts.app.domain.selection.calculators import StrategyFactory
from chmcts.app.domain.evaluation.calculators import (
    OfflineReplicationRunner,
    OfflineSummaryCalculator,
    RegretReplicationRunner,
    RegretSummaryCalculator,
    ScaleReplicationRunner,
    ScaleSummaryCalculator,
    checked_ratio,
)
from chmcts.app.domain.evaluation.formatters import (
    ExperimentSummaryJSONFormatter,
    OfflineCSVFormatter,
    RegretCSVFormatter,
    ScaleCSVFormatter,
    SvgChartFormatter,
)
from chmcts.app.domain.evaluation.models import (
    CHVI_LABEL,
    ExperimentKind,
    OfflineCheckpoint,
    OfflineRun,
    RegretEstimator,
    ScaleRow,
)
from chmcts.app.domain.evaluation.providers import ExperimentConfigProvider
from chmcts.app.domain.evaluation.schemas import (
    ChartInput,
    ExperimentConfig,
    ExperimentRequest,
    ExperimentResponse,
    InstanceSpec,
    OfflineJob,
    OfflineSummaryInput,
    OfflineTableInput,
    RegretJob,
    RegretSummaryInput,
    RegretTableInput,
    ScaleJob,
    ScaleSummaryInput,
    ScaleTableInput,
    SummaryDocumentInput,
)

logger = get_logger(__name__)


class ExperimentService(BatchService[ExperimentRequest, ExperimentResponse]):
    """
    실험 서비스 공통 흐름

    하위 클래스는 kind와 run()만 정의합니다. 출력 디렉토리는 --out, 설정의 out_dir,
    OUT_DIR 순서로 정하며 run manifest도 같은 곳에 씁니다.
    """

    kind: ClassVar[ExperimentKind]

    def __init__(self, context):
        super().__init__(context)
        self.config_provider = ExperimentConfigProvider()
        self.loader = ModelLoadService(context)
        self.solver = ChviSolver()
        self.writer = ArtifactWriter()
        self.chart_formatter = SvgChartFormatter()
        self.summary_formatter = ExperimentSummaryJSONFormatter()

    async def validate_request(self, request: ExperimentRequest) -> None:
        if request.experiment is not self.kind:
            raise UsageException(
                f"{type(self).__name__} runs '{self.kind.value}' experiments, "
                f"got '{request.experiment.value}'"
            )

    async def execute(
        self, request: ExperimentRequest, **kwargs: Any
    ) -> ServiceResult[ExperimentResponse]:
        try:
            await self.before_execute(request)
            await self.validate_request(request)
            config = await self.config_provider.resolve_config(
                self.kind, request.config_path, request.overrides
            )
            unknown = [s for s in config.strategies if s not in StrategyFactory.names()]
            if unknown:
                raise UsageException(
                    f"Unknown strategy '{unknown[0]}'; choose from "
                    f"{', '.join(StrategyFactory.names())}",
                    details={"strategies": unknown},
                )
            if config.out_dir is not None:
                self.context.out_dir = Path(config.out_dir)
            self.context.record(
                experiment=config.model_dump(mode="json", exclude_none=True),
                streams=self.context.streams.describe(config.replications),
            )

            response = await self.run(config, self.context.out_dir)
            summary_path = self.context.out_dir / f"{self.kind.value}-summary.json"
            response.files["summary"] = str(summary_path)
            text = await self.summary_formatter.format(
                SummaryDocumentInput(response=response, config=config)
            )
            await self.write(summary_path, text.content)

            result = ServiceResult.ok(response)
            await self.after_execute(request, result)
            return result
        except Exception as e:
            return await self.handle_error(e, request)

    @abstractmethod
    async def run(self, config: ExperimentConfig, out_dir: Path) -> ExperimentResponse:
        raise NotImplementedError("Subclass must implement 'run' method")

    async def load_target(self, config: ExperimentConfig) -> Momdp:
        if config.source is not None:
            return await self.loader.load(config.source)
        assert config.instance is not None
        instance = await GdstService(self.context).build(config.instance.to_gdst())
        self.context.record(model_name=instance.model.name)
        return instance.model

    async def write(self, path: Path, content: str) -> str:
        written = await self.writer.provide(ArtifactInput(path=str(path), content=content))
        return written.path

    async def write_chart(self, out_dir: Path, chart: ChartInput) -> str:
        text = await self.chart_formatter.format(chart)
        return await self.write(out_dir / f"{self.kind.value}.svg", text.content)

    def chvi_feasible(self, model: Momdp) -> bool:
        limit = get_settings().CHVI_MAX_BACKUPS
        feasible = ChviSolver.max_backups(model) <= limit
        if not feasible:
            logger.warning(
                f"Skipping the CHVI row for {model.name}: more than {limit} backups",
                extra={"run_id": self.context.run_id},
            )
        return feasible


class RegretExperimentService(ExperimentService):
    """
    온라인 후회 실험

    정답 CCS는 CHVI로 한 번 계산해 모든 작업에 넘깁니다.
    """

    kind = ExperimentKind.REGRET

    def __init__(self, context):
        super().__init__(context)
        self.summary_calculator = RegretSummaryCalculator()
        self.csv_formatter = RegretCSVFormatter()

    async def run(self, config: ExperimentConfig, out_dir: Path) -> ExperimentResponse:
        settings = get_settings()
        model = await self.load_target(config)
        solution = self.solver.solve(
            model,
            PruneMode.CCS,
            keep_tables=False,
            max_table=settings.EXACT_ESTIMATOR_MAX_TABLE,
        )
        true_ccs = solution.root
        if true_ccs.is_empty():
            raise BusinessLogicException(f"Ground truth CCS of '{model.name}' is empty")
        logger.info(
            f"Ground truth for {model.name}: |CCS|={len(true_ccs)} "
            f"({solution.backup_count} backups)",
            extra={"run_id": self.context.run_id},
        )

        assert config.trials is not None
        jobs = [
            RegretJob(
                model=model,
                true_ccs=true_ccs,
                strategy=strategy,
                replication=replication,
                trials=config.trials,
                master_seed=self.context.master_seed,
                estimator=config.estimator,
                prune=config.prune,
                exploration=config.exploration,
            )
            for strategy in config.strategies
            for replication in range(config.replications)
        ]
        curves = await self.execute_batch(RegretReplicationRunner.run_job, jobs)

        summary = await self.summary_calculator.calculate(RegretSummaryInput(curves=curves))
        csv_text = await self.csv_formatter.format(RegretTableInput(curves=curves))
        files = {"csv": await self.write(out_dir / "regret.csv", csv_text.content)}
        estimator = "exact" if config.estimator is RegretEstimator.EXACT else "realized"
        files["chart"] = await self.write_chart(
            out_dir,
            ChartInput(
                title=f"Cumulative linear contextual regret on {model.name} ({estimator})",
                x_label="trial",
                y_label="cumulative regret",
                series=summary.series,
            ),
        )
        return ExperimentResponse(
            experiment=self.kind,
            target=model.name,
            out_dir=str(out_dir),
            files=files,
            summaries=[s.model_dump(mode="json") for s in summary.summaries],
            ground_truth={"ccs": true_ccs.to_list(), "backups": solution.backup_count},
        )


class OfflineExperimentService(ExperimentService):
    """
    하이퍼볼륨-백업 실험

    CHVI 행은 풀이의 실제 백업 수에서 한 번 기록합니다 (반복 0).
    """

    kind = ExperimentKind.OFFLINE

    def __init__(self, context):
        super().__init__(context)
        self.summary_calculator = OfflineSummaryCalculator()
        self.csv_formatter = OfflineCSVFormatter()

    async def run(self, config: ExperimentConfig, out_dir: Path) -> ExperimentResponse:
        settings = get_settings()
        model = await self.load_target(config)
        if model.num_objectives > 2:
            raise UsageException(
                "Offline experiments report hypervolume, which needs at most 2 objectives",
                details={"objectives": model.num_objectives},
            )
        assert config.backup_budget is not None
        checkpoints = config.checkpoints or settings.CHECKPOINT_COUNT
        jobs = [
            OfflineJob(
                model=model,
                strategy=strategy,
                replication=replication,
                backup_budget=config.backup_budget,
                master_seed=self.context.master_seed,
                checkpoints=checkpoints,
                prune=config.prune,
                exploration=config.exploration,
            )
            for strategy in config.strategies
            for replication in range(config.replications)
        ]
        runs = await self.execute_batch(OfflineReplicationRunner.run_job, jobs)

        ground_truth = None
        if self.chvi_feasible(model):
            solution = self.solver.solve(model, config.prune, keep_tables=False)
            hypervolume = solution.root.hypervolume(model.hypervolume_reference)
            runs.append(
                OfflineRun(
                    strategy=CHVI_LABEL,
                    replication=0,
                    checkpoints=[
                        OfflineCheckpoint(backups=solution.backup_count, hypervolume=hypervolume)
                    ],
                )
            )
            ground_truth = {
                "ccs": solution.root.to_list(),
                "backups": solution.backup_count,
                "hypervolume": hypervolume,
            }

        summary = await self.summary_calculator.calculate(OfflineSummaryInput(runs=runs))
        csv_text = await self.csv_formatter.format(OfflineTableInput(runs=runs))
        files = {"csv": await self.write(out_dir / "offline.csv", csv_text.content)}
        files["chart"] = await self.write_chart(
            out_dir,
            ChartInput(
                title=f"Root hypervolume on {model.name}",
                x_label="backups",
                y_label="hypervolume",
                series=summary.series,
            ),
        )
        return ExperimentResponse(
            experiment=self.kind,
            target=model.name,
            out_dir=str(out_dir),
            files=files,
            summaries=[s.model_dump(mode="json") for s in summary.summaries],
            ground_truth=ground_truth,
        )


class ScaleExperimentService(ExperimentService):
    """
    확장성 실험

    열 수 c마다 hv(c, 0)을 BFS 오라클로 정확히 구하고,
    (c, p, 전략, 반복) 작업의 루트 하이퍼볼륨을 그 값으로 나눕니다.
    """

    kind = ExperimentKind.SCALE

    def __init__(self, context):
        super().__init__(context)
        self.generator = GdstGenerator()
        self.summary_calculator = ScaleSummaryCalculator()
        self.csv_formatter = ScaleCSVFormatter()

    def reference_hypervolume(self, spec: InstanceSpec, columns: int) -> float:
        """
        Raises:
            BusinessLogicException: 지평 안에 닿는 보물이 없어 hv(c, 0) = 0일 때
        """
        instance = self.generator.generate(spec.to_gdst(columns=columns, noise=0.0))
        reference = ShortestPathOracle(instance).front().hypervolume(
            instance.model.hypervolume_reference
        )
        if reference <= 0.0:
            raise BusinessLogicException(
                f"hv({columns}, 0) is zero for {instance.model.name}; increase the horizon",
                details={"columns": columns, "horizon": instance.horizon},
            )
        return reference

    async def run(self, config: ExperimentConfig, out_dir: Path) -> ExperimentResponse:
        spec = config.instance or InstanceSpec()
        assert config.columns is not None and config.backup_budget is not None
        jobs: list[ScaleJob] = []
        chvi_rows: list[ScaleRow] = []
        references: dict[int, float] = {}

        for columns in config.columns:
            reference = references.setdefault(columns, self.reference_hypervolume(spec, columns))
            for noise in config.noises:
                gdst = spec.to_gdst(columns=columns, noise=noise)
                jobs.extend(
                    ScaleJob(
                        gdst=gdst,
                        reference_hypervolume=reference,
                        strategy=strategy,
                        replication=replication,
                        backup_budget=config.backup_budget,
                        master_seed=self.context.master_seed,
                        prune=config.prune,
                        exploration=config.exploration,
                    )
                    for strategy in config.strategies
                    for replication in range(config.replications)
                )
                model = self.generator.generate(gdst).model
                if self.chvi_feasible(model):
                    solution = self.solver.solve(model, config.prune, keep_tables=False)
                    hypervolume = solution.root.hypervolume(model.hypervolume_reference)
                    chvi_rows.append(
                        ScaleRow(
                            columns=columns,
                            noise=noise,
                            strategy=CHVI_LABEL,
                            ratio=checked_ratio(hypervolume, reference, f"CHVI on {model.name}"),
                            replication=0,
                        )
                    )

        logger.info(
            f"Scale experiment: {len(jobs)} search jobs, {len(chvi_rows)} CHVI rows",
            extra={"run_id": self.context.run_id},
        )
        rows = list(await self.execute_batch(ScaleReplicationRunner.run_job, jobs)) + chvi_rows

        summary = await self.summary_calculator.calculate(ScaleSummaryInput(rows=rows))
        csv_text = await self.csv_formatter.format(ScaleTableInput(rows=rows))
        files = {"csv": await self.write(out_dir / "scale.csv", csv_text.content)}
        files["chart"] = await self.write_chart(
            out_dir,
            ChartInput(
                title="Hypervolume ratio ehv(c, p) / hv(c, 0)",
                x_label="columns",
                y_label="ratio",
                series=summary.series,
            ),
        )
        return ExperimentResponse(
            experiment=self.kind,
            target=f"gdst c in {sorted(set(config.columns))}, p in {config.noises}",
            out_dir=str(out_dir),
            files=files,
            summaries=[s.model_dump(mode="json") for s in summary.summaries],
            ground_truth={"reference_hypervolume": {str(c): v for c, v in references.items()}},
        )


EXPERIMENT_SERVICES: dict[ExperimentKind, type[ExperimentService]] = {
    ExperimentKind.REGRET: RegretExperimentService,
    ExperimentKind.OFFLINE: OfflineExperimentService,
    ExperimentKind.SCALE: ScaleExperimentService,
}
