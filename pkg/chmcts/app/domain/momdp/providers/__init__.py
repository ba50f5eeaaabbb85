"""
MOMDP Domain Providers

모델 파일과 체크인된 fixture를 읽어 검증된 Momdp로 만듭니다.
"""

from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.base import FileProvider
from chmcts.app.shared.exceptions import ModelException, UsageException, ValidationException
from chmcts.app.domain.momdp.calculators import MomdpValidator
from chmcts.app.domain.momdp.models import ModelViolation, Momdp
from chmcts.app.domain.momdp.schemas import (
    FixtureInput,
    FixtureListing,
    ModelFileInput,
    ModelOutput,
    MomdpDocument,
)

logger = get_logger(__name__)

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def _readonly(values: list[float] | None) -> np.ndarray | None:
    if values is None:
        return None
    array = np.asarray(values, dtype=np.float64)
    array.setflags(write=False)
    return array


class MomdpLoader(FileProvider[Any, ModelOutput]):
    """
    모델 문서 → Momdp 변환 공통 로직

    순서: 스키마 검증(pydantic) → 모델 구성 → 불변식 검증 → 확률 재정규화(한 번).
    """

    def build(self, raw: Any, source: str) -> Momdp:
        """
        Raises:
            ValidationException: 문서 구조가 스키마와 맞지 않을 때
            ModelException: 모델 불변식 위반이 하나라도 있을 때
        """
        try:
            document = MomdpDocument.model_validate(raw)
        except ValidationError as e:
            raise ValidationException(
                f"Invalid model document {source}: {e.error_count()} error(s)",
                details={"source": source, "errors": e.errors(include_url=False)},
            )

        violations: list[ModelViolation] = []
        rewards: dict[tuple[int, int], np.ndarray] = {}
        for entry in document.rewards:
            key = (entry.s, entry.a)
            if key in rewards:
                violations.append(
                    ModelViolation("duplicate", "reward listed twice", entry.s, entry.a)
                )
            rewards[key] = _readonly(entry.vector)

        transitions: dict[tuple[int, int], tuple[tuple[int, float], ...]] = {}
        for entry in document.transitions:
            key = (entry.s, entry.a)
            if key in transitions:
                violations.append(
                    ModelViolation("duplicate", "transition listed twice", entry.s, entry.a)
                )
            merged: dict[int, float] = {}
            for successor in entry.successors:
                merged[successor.s2] = merged.get(successor.s2, 0.0) + successor.p
            transitions[key] = tuple(sorted(merged.items()))

        model = Momdp(
            num_states=document.num_states,
            num_actions=document.num_actions,
            num_objectives=document.num_objectives,
            horizon=document.horizon,
            initial_state=document.initial_state,
            terminals=frozenset(document.terminals),
            rewards=rewards,
            transitions=transitions,
            arrival_rewards={
                entry.s: _readonly(entry.vector) for entry in document.arrival_rewards
            },
            terminal_bonus=_readonly(document.terminal_bonus),
            name=document.name or Path(source).stem,
            reference_point=_readonly(document.reference_point),
            utopian_point=_readonly(document.utopian_point),
            return_bound=document.return_bound,
        )

        violations.extend(MomdpValidator().validate(model))
        if violations:
            logger.warning(
                f"Model {source} has {len(violations)} violation(s)",
                extra={"source": source, "violations": [str(v) for v in violations[:20]]},
            )
            raise ModelException(
                f"Model {source} is invalid: {violations[0]}"
                + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""),
                violations,
            )

        model = model.renormalized()
        logger.debug(f"Loaded {model!r} from {source}")
        return model


class MomdpFileProvider(MomdpLoader):
    """모델 JSON 파일 Provider"""

    async def provide(self, input_data: ModelFileInput) -> ModelOutput:
        path = self.resolve(input_data.path)
        model = self.build(self.read_json(path), str(path))
        return ModelOutput(model=model, source=str(path))


class FixtureProvider(MomdpLoader):
    """
    체크인된 fixture Provider

    이름은 fixtures/ 디렉토리의 <name>.json 파일에 대응합니다.
    """

    def __init__(self, base_dir: Path | None = None):
        super().__init__(base_dir or FIXTURE_DIR)

    def names(self) -> list[str]:
        return sorted(path.stem for path in self.base_dir.glob("*.json"))

    def path_of(self, name: str) -> Path:
        if name not in self.names():
            raise UsageException(
                f"Unknown fixture '{name}' (available: {', '.join(self.names())})",
                details={"name": name},
            )
        return self.resolve(f"{name}.json")

    async def provide(self, input_data: FixtureInput) -> ModelOutput:
        path = self.path_of(input_data.name)
        model = self.build(self.read_json(path), str(path))
        return ModelOutput(model=model, source=f"fixture:{input_data.name}")

    def listing(self) -> list[FixtureListing]:
        entries = []
        for name in self.names():
            raw = self.read_json(self.path_of(name))
            entries.append(
                FixtureListing(
                    name=name,
                    num_states=raw["num_states"],
                    num_actions=raw["num_actions"],
                    num_objectives=raw["num_objectives"],
                    horizon=raw["horizon"],
                )
            )
        return entries


__all__ = ["MomdpLoader", "MomdpFileProvider", "FixtureProvider", "FIXTURE_DIR"]
