"""
Evaluation Domain Providers

실험 설정 JSON 파일을 읽고 CLI 덮어쓰기와 합쳐 검증합니다.
"""

from typing import Any

from pydantic import ValidationError

from chmcts.app.shared.base import FileProvider
from chmcts.app.shared.exceptions import ValidationException
from chmcts.app.domain.evaluation.models import ExperimentKind
from chmcts.app.domain.evaluation.schemas import (
    ConfigFileInput,
    ConfigFileOutput,
    ExperimentConfig,
    ExperimentOverrides,
)


class ExperimentConfigProvider(FileProvider[ConfigFileInput, ConfigFileOutput]):
    """
    실험 설정 Provider

    사용 예시:
        provider = ExperimentConfigProvider()
        config = await provider.resolve_config(ExperimentKind.REGRET, "regret.json", overrides)
    """

    async def provide(self, input_data: ConfigFileInput) -> ConfigFileOutput:
        path = self.resolve(input_data.path)
        document = self.read_json(path)
        if not isinstance(document, dict):
            raise ValidationException(
                f"Experiment config {path} must be a JSON object",
                details={"path": str(path)},
            )
        return ConfigFileOutput(document=document, source=str(path))

    async def resolve_config(
        self,
        experiment: ExperimentKind,
        path: str | None,
        overrides: ExperimentOverrides,
    ) -> ExperimentConfig:
        """
        설정 파일(없으면 빈 문서) 위에 CLI 값을 덮어쓴 최종 설정.

        Raises:
            NotFoundException: 설정 파일이 없을 때
            ValidationException: 내용이 잘못되었거나 명령과 실험 종류가 다를 때
        """
        document: dict[str, Any] = {"experiment": experiment.value}
        source = "<flags>"
        if path is not None:
            loaded = await self.provide(ConfigFileInput(path=path))
            document.update(loaded.document)
            source = loaded.source
            if document.get("experiment", experiment.value) != experiment.value:
                raise ValidationException(
                    f"{source} describes a '{document['experiment']}' experiment, "
                    f"not '{experiment.value}'",
                    details={"path": source, "experiment": document["experiment"]},
                )
        document.update(overrides.values())

        try:
            return ExperimentConfig.model_validate(document)
        except ValidationError as e:
            problems = [
                f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
                for err in e.errors()
            ]
            raise ValidationException(
                f"Invalid experiment config ({source}): " + "; ".join(problems),
                details={"path": source, "errors": problems},
            )


__all__ = ["ExperimentConfigProvider"]
