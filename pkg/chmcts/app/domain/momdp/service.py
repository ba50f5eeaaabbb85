"""
MOMDP Domain Service

모델 로드(파일 또는 fixture)와 fixture 목록/내보내기를 조율합니다.
"""

from pathlib import Path
from typing import Any

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import BaseService
from chmcts.app.shared.types import ServiceResult
from chmcts.app.domain.momdp.formatters import MomdpJSONFormatter
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.providers import FixtureProvider, MomdpFileProvider
from chmcts.app.domain.momdp.schemas import (
    FixtureInput,
    FixtureListing,
    ModelFileInput,
    ModelFormatterInput,
    ModelSourceRequest,
)

logger = get_logger(__name__)


class ModelLoadService(BaseService[ModelSourceRequest, Momdp]):
    """
    모델 로드 서비스

    다른 서비스는 load()를 직접 호출해 예외를 그대로 전파받고,
    CLI는 execute()로 ServiceResult를 받습니다.
    """

    def __init__(self, context):
        super().__init__(context)
        self.file_provider = MomdpFileProvider()
        self.fixture_provider = FixtureProvider()

    async def load(self, request: ModelSourceRequest) -> Momdp:
        if request.fixture is not None:
            output = await self.fixture_provider.provide(FixtureInput(name=request.fixture))
        else:
            output = await self.file_provider.provide(ModelFileInput(path=str(request.path)))
        logger.info(
            f"Loaded model {output.model!r}",
            extra={"run_id": self.context.run_id, "source": output.source},
        )
        self.context.record(model_source=output.source, model_name=output.model.name)
        return output.model

    async def execute(self, request: ModelSourceRequest, **kwargs: Any) -> ServiceResult[Momdp]:
        try:
            await self.before_execute(request)
            model = await self.load(request)
            result = ServiceResult.ok(model, metadata={"name": model.name})
            await self.after_execute(request, result)
            return result
        except Exception as e:
            return await self.handle_error(e, request)


class FixtureCatalogService(BaseService[str | None, list[FixtureListing]]):
    """
    fixture 목록 또는 내보내기

    request가 None이면 전체 목록, 이름이면 그 fixture를 out_path에 씁니다.
    """

    def __init__(self, context):
        super().__init__(context)
        self.provider = FixtureProvider()
        self.formatter = MomdpJSONFormatter()

    async def execute(
        self,
        request: str | None,
        out_path: Path | None = None,
        **kwargs: Any,
    ) -> ServiceResult[list[FixtureListing]]:
        try:
            await self.before_execute(request)
            listing = self.provider.listing()
            if request is None:
                return ServiceResult.ok(listing)

            output = await self.provider.provide(FixtureInput(name=request))
            selected = [entry for entry in listing if entry.name == request]
            if out_path is not None:
                text = await self.formatter.format(ModelFormatterInput(model=output.model))
                written = self.provider.write_text(out_path, text.content)
                selected = [entry.model_copy(update={"path": str(written)}) for entry in selected]
                logger.info(
                    f"Wrote fixture '{request}' to {written}",
                    extra={"run_id": self.context.run_id},
                )
            return ServiceResult.ok(selected)
        except Exception as e:
            return await self.handle_error(e, request)
