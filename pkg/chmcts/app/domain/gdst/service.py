"""
GDST Domain Service

gen-env 명령의 흐름을 조율합니다.
    1. 인스턴스 생성 (GdstGenerator)
    2. 모델 불변식 검증 (MomdpValidator)
    3. 모델 JSON + 사이드카 메타데이터 저장
"""

from pathlib import Path
from typing import Any

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import ArtifactWriter, BaseService
from chmcts.app.shared.exceptions import ModelException
from chmcts.app.shared.types import ArtifactInput, ServiceResult
from chmcts.app.domain.momdp.calculators import MomdpValidator
from chmcts.app.domain.momdp.formatters import MomdpJSONFormatter
from chmcts.app.domain.momdp.schemas import ModelFormatterInput
from chmcts.app.domain.gdst.calculators import GdstGenerator
from chmcts.app.domain.gdst.formatters import GdstAsciiFormatter, GdstMetadataFormatter
from chmcts.app.domain.gdst.models import GdstConfig, GdstInstance
from chmcts.app.domain.gdst.schemas import (
    GenEnvRequest,
    GenEnvResponse,
    GenerateInput,
    InstanceFormatterInput,
)

logger = get_logger(__name__)


def metadata_path(model_path: str | Path) -> Path:
    """model.json → model.meta.json"""
    path = Path(model_path)
    return path.with_name(f"{path.stem}.meta.json")


class GdstService(BaseService[GenEnvRequest, GenEnvResponse]):
    """GDST 생성 서비스"""

    def __init__(self, context):
        super().__init__(context)
        self.generator = GdstGenerator()
        self.validator = MomdpValidator()
        self.model_formatter = MomdpJSONFormatter()
        self.metadata_formatter = GdstMetadataFormatter()
        self.ascii_formatter = GdstAsciiFormatter()
        self.writer = ArtifactWriter()

    async def build(self, config: GdstConfig) -> GdstInstance:
        """
        인스턴스를 만들고 두 모델을 모두 검증합니다.

        Raises:
            ModelException: 생성된 모델이 불변식을 어길 때
        """
        output = await self.generator.calculate(GenerateInput(config=config))
        instance = output.instance
        for model in (instance.model, instance.raw_model):
            violations = self.validator.validate(model)
            if violations:
                raise ModelException(f"Generated model {model.name} is invalid", violations)
        logger.info(
            f"Generated {instance!r}",
            extra={"run_id": self.context.run_id, "treasures": len(instance.treasures)},
        )
        return instance

    async def execute(self, request: GenEnvRequest, **kwargs: Any) -> ServiceResult[GenEnvResponse]:
        try:
            await self.before_execute(request)
            self.context.record(gdst=request.config.model_dump(), raw=request.raw)
            instance = await self.build(request.config)
            model = instance.raw_model if request.raw else instance.model

            text = await self.model_formatter.format(ModelFormatterInput(model=model))
            written = await self.writer.provide(
                ArtifactInput(path=request.out, content=text.content)
            )

            sidecar = await self.metadata_formatter.format(
                InstanceFormatterInput(
                    instance=instance,
                    model_file=Path(written.path).name,
                    raw=request.raw,
                )
            )
            meta = await self.writer.provide(
                ArtifactInput(path=str(metadata_path(written.path)), content=sidecar.content)
            )

            ascii_dump = None
            if request.ascii:
                ascii_dump = (
                    await self.ascii_formatter.format(InstanceFormatterInput(instance=instance))
                ).content

            result = ServiceResult.ok(
                GenEnvResponse(
                    model=model.name,
                    out=written.path,
                    metadata_out=meta.path,
                    num_states=model.num_states,
                    horizon=model.horizon,
                    rows=instance.rows,
                    columns=instance.columns,
                    treasures=instance.treasures,
                    utopian_point=[float(x) for x in model.utopian_point],
                    ascii=ascii_dump,
                )
            )
            await self.after_execute(request, result)
            return result
        except Exception as e:
            return await self.handle_error(e, request)
