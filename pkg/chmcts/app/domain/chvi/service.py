"""
CHVI Domain Service

solve 명령의 흐름을 조율합니다.
    1. 모델 로드 (ModelLoadService)
    2. CHVI 풀이 (ChviSolver)
    3. 선택적 정책 추출/평가 (PolicyExtractor, PolicyEvaluator)
    4. JSON / CSV 저장 (SolutionJSONFormatter, PointSetCSVFormatter)
"""

from typing import Any

import numpy as np

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import ArtifactWriter, BaseService
from chmcts.app.shared.types import ArtifactInput, ServiceResult
from chmcts.app.domain.geometry.calculators import FrontSummaryCalculator, Scalarization
from chmcts.app.domain.geometry.models import WeightVector
from chmcts.app.domain.geometry.formatters import PointSetCSVFormatter
from chmcts.app.domain.geometry.schemas import FrontSummaryInput, PointSetFormatterInput
from chmcts.app.domain.momdp.calculators import PolicyEvaluator
from chmcts.app.domain.momdp.service import ModelLoadService
from chmcts.app.domain.chvi.calculators import ChviSolver, PolicyExtractor
from chmcts.app.domain.chvi.formatters import SolutionJSONFormatter
from chmcts.app.domain.chvi.schemas import (
    ChviInput,
    PolicyReport,
    SolutionFormatterInput,
    SolveRequest,
    SolveResponse,
)

logger = get_logger(__name__)


class ChviService(BaseService[SolveRequest, SolveResponse]):
    """정답 CCS 풀이 서비스"""

    def __init__(self, context):
        super().__init__(context)
        self.loader = ModelLoadService(context)
        self.solver = ChviSolver()
        self.summary = FrontSummaryCalculator()
        self.formatter = SolutionJSONFormatter()
        self.front_formatter = PointSetCSVFormatter()
        self.writer = ArtifactWriter()

    async def execute(self, request: SolveRequest, **kwargs: Any) -> ServiceResult[SolveResponse]:
        try:
            await self.before_execute(request)
            model = await self.loader.load(request.source)
            self.context.record(prune=request.prune.value)

            output = await self.solver.calculate(
                ChviInput(
                    model=model,
                    prune_mode=request.prune,
                    keep_tables=True,
                    keep_q_sets=request.dump_tables,
                )
            )
            solution = output.solution
            front = await self.summary.calculate(
                FrontSummaryInput(
                    points=solution.root,
                    reference_point=model.hypervolume_reference.tolist(),
                )
            )
            logger.info(
                f"Root CCS of '{model.name}': {len(solution.root)} point(s), "
                f"{solution.backup_count} backups",
                extra={"run_id": self.context.run_id, "hypervolume": front.hypervolume},
            )

            policy = self._policy_report(solution, request.weights) if request.weights else None

            written = None
            if request.out:
                text = await self.formatter.format(
                    SolutionFormatterInput(
                        solution=solution,
                        front=front,
                        policy=policy,
                        include_tables=request.dump_tables,
                    )
                )
                artifact = await self.writer.provide(
                    ArtifactInput(path=request.out, content=text.content)
                )
                written = artifact.path

            front_csv = None
            if request.front_csv:
                text = await self.front_formatter.format(
                    PointSetFormatterInput(points=solution.root)
                )
                artifact = await self.writer.provide(
                    ArtifactInput(path=request.front_csv, content=text.content)
                )
                front_csv = artifact.path

            result = ServiceResult.ok(
                SolveResponse(
                    model=model.name,
                    prune=request.prune,
                    backup_count=solution.backup_count,
                    front=front,
                    policy=policy,
                    out=written,
                    front_csv=front_csv,
                )
            )
            await self.after_execute(request, result)
            return result
        except Exception as e:
            return await self.handle_error(e, request)

    def _policy_report(self, solution, weights: list[float]) -> PolicyReport:
        w = WeightVector(weights)
        extractor = PolicyExtractor(solution)
        policy = extractor.extract(w)
        value = PolicyEvaluator(solution.model).evaluate(policy)
        model = solution.model
        root_actions = (
            [int(policy.table[model.initial_state, 0])] if model.horizon > 0 else []
        )
        return PolicyReport(
            weights=w.tolist(),
            scalarized_value=Scalarization.linear(value, w),
            policy_value=[float(x) for x in np.asarray(value)],
            root_actions=root_actions,
        )
