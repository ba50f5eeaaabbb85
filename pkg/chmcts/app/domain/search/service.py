"""
Search Domain Service

search 명령의 흐름을 조율합니다.
    1. 모델 로드 (ModelLoadService)
    2. 전략 생성 (StrategyFactory)
    3. 트리 탐색 (TreeSearchCalculator) - 시드 스트림 (0, SEARCH) / (0, CONTEXTS)
    4. 선택적 CHVI 비교, 결과 JSON / 스냅샷 / 루트 CSV / CZT 공 덤프 저장
"""

from typing import Any

from chmcts.app.core.config import get_settings
from chmcts.app.core.context import StreamPurpose
from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import ArtifactWriter, BaseService
from chmcts.app.shared.exceptions import UsageException
from chmcts.app.shared.types import ArtifactInput, ServiceResult
from chmcts.app.domain.geometry.calculators import FrontSummaryCalculator
from chmcts.app.domain.geometry.formatters import PointSetCSVFormatter
from chmcts.app.domain.geometry.schemas import FrontSummaryInput, PointSetFormatterInput
from chmcts.app.domain.momdp.service import ModelLoadService
from chmcts.app.domain.chvi.calculators import ChviSolver
from chmcts.app.domain.search.calculators import TreeSearchCalculator
from chmcts.app.domain.search.formatters import (
    SearchResultJSONFormatter,
    TreeSnapshotJSONFormatter,
)
from chmcts.app.domain.search.models import SearchConfig, SearchTree
from chmcts.app.domain.search.schemas import (
    SearchReportInput,
    SearchRequest,
    SearchResponse,
    SnapshotInput,
    TreeSearchInput,
)
from chmcts.app.domain.selection.calculators import StrategyFactory, ZoomingStrategy
from chmcts.app.domain.selection.formatters import BallCSVFormatter
from chmcts.app.domain.selection.models import BallSet
from chmcts.app.domain.selection.schemas import BallDumpInput

logger = get_logger(__name__)


class SearchService(BaseService[SearchRequest, SearchResponse]):
    """CHMCTS 탐색 서비스"""

    def __init__(self, context):
        super().__init__(context)
        self.loader = ModelLoadService(context)
        self.calculator = TreeSearchCalculator()
        self.summary = FrontSummaryCalculator()
        self.solver = ChviSolver()
        self.result_formatter = SearchResultJSONFormatter()
        self.snapshot_formatter = TreeSnapshotJSONFormatter()
        self.ball_formatter = BallCSVFormatter()
        self.front_formatter = PointSetCSVFormatter()
        self.writer = ArtifactWriter()

    async def validate_request(self, request: SearchRequest) -> None:
        if request.dump_balls and request.strategy != ZoomingStrategy.name:
            raise UsageException(
                "--dump-balls is only available with --strategy zooming",
                details={"strategy": request.strategy},
            )

    async def execute(self, request: SearchRequest, **kwargs: Any) -> ServiceResult[SearchResponse]:
        try:
            await self.before_execute(request)
            await self.validate_request(request)
            settings = get_settings()
            model = await self.loader.load(request.source)
            strategy = StrategyFactory.create(request.strategy, model, request.exploration)

            streams = self.context.streams
            self.context.record(
                strategy=strategy.name,
                budget=request.budget.model_dump(exclude_none=True),
                prune=request.prune.value,
                labelling=request.labelling,
                streams=streams.describe(1),
            )
            output = await self.calculator.calculate(
                TreeSearchInput(
                    model=model,
                    strategy=strategy,
                    budget=request.budget,
                    config=SearchConfig(prune_mode=request.prune, labelling=request.labelling),
                    search_rng=streams.generator(0, StreamPurpose.SEARCH),
                    context_rng=streams.generator(0, StreamPurpose.CONTEXTS),
                )
            )
            search = output.result
            front = await self.summary.calculate(
                FrontSummaryInput(
                    points=output.root_ccs,
                    reference_point=model.hypervolume_reference.tolist(),
                )
            )
            logger.info(
                f"{strategy.name} search on '{model.name}': {search.stats.trials_run} trials, "
                f"{search.stats.backups_performed} backups, |CCS|={front.size} "
                f"({search.stats.stop_reason})",
                extra={"run_id": self.context.run_id, "hypervolume": front.hypervolume},
            )

            matches_exact = None
            if request.compare_exact:
                exact = self.solver.solve(
                    model,
                    mode=request.prune,
                    keep_tables=False,
                    max_table=settings.EXACT_ESTIMATOR_MAX_TABLE,
                ).root
                matches_exact = output.root_ccs.allclose(exact)

            response = SearchResponse(
                model=model.name,
                strategy=strategy.name,
                prune=request.prune,
                stats=search.stats.as_dict(),
                front=front,
                matches_exact=matches_exact,
            )
            await self._write_artifacts(request, response, search.tree, model.name)

            result = ServiceResult.ok(response)
            await self.after_execute(request, result)
            return result
        except Exception as e:
            return await self.handle_error(e, request)

    async def _write_artifacts(
        self, request: SearchRequest, response: SearchResponse, tree: SearchTree, model_name: str
    ) -> None:
        if request.out:
            text = await self.result_formatter.format(SearchReportInput(response=response))
            response.out = await self._write(request.out, text.content)
        if request.snapshot:
            text = await self.snapshot_formatter.format(
                SnapshotInput(
                    tree=tree,
                    model_name=model_name,
                    node_limit=get_settings().SNAPSHOT_NODE_LIMIT,
                )
            )
            response.snapshot = await self._write(request.snapshot, text.content)
        if request.front_csv:
            text = await self.front_formatter.format(
                PointSetFormatterInput(points=tree.root.value_set)
            )
            response.front_csv = await self._write(request.front_csv, text.content)
        if request.dump_balls:
            balls = tree.root.bandit_state
            if not isinstance(balls, BallSet):
                logger.warning(
                    "Root has no CZT state to dump (no action was selected)",
                    extra={"run_id": self.context.run_id},
                )
                return
            text = await self.ball_formatter.format(
                BallDumpInput(ball_set=balls, state=tree.root.state, depth=0)
            )
            response.balls = await self._write(request.dump_balls, text.content)

    async def _write(self, path: str, content: str) -> str:
        written = await self.writer.provide(ArtifactInput(path=path, content=content))
        return written.path
