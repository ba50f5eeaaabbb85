"""
BaseProvider: 데이터 제공자 추상 클래스

외부 데이터 소스(모델 파일, 설정 파일, 체크인된 fixture)로부터 데이터를 가져오고,
결과 산출물을 디스크에 쓰는 책임을 가집니다.
"""

import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Generic, TypeVar

from chmcts.app.core.logging import get_logger
from chmcts.app.shared.exceptions import NotFoundException, ProviderException
from chmcts.app.shared.types import ArtifactInput, ArtifactOutput, ProviderInput, ProviderOutput

# 제네릭 타입 변수
TInput = TypeVar("TInput", bound=ProviderInput)
TOutput = TypeVar("TOutput", bound=ProviderOutput)

logger = get_logger(__name__)


class BaseProvider(ABC, Generic[TInput, TOutput]):
    """
    Provider 추상 베이스 클래스

    책임:
        - 파일 시스템 접근
        - 체크인된 리소스 조회

    사용 예시:
        class MomdpFileProvider(BaseProvider[ModelFileInput, ModelFileOutput]):
            async def provide(self, input_data: ModelFileInput) -> ModelFileOutput:
                document = self.read_json(input_data.path)
                ...
    """

    def __init__(self, base_dir: Path | None = None):
        """
        Args:
            base_dir: 상대 경로의 기준 디렉토리 (None이면 현재 디렉토리)
        """
        self.base_dir = base_dir

    @abstractmethod
    async def provide(self, input_data: TInput) -> TOutput:
        """
        데이터를 제공합니다.

        Raises:
            NotFoundException: 파일이 없을 때
            ProviderException: 데이터 제공 중 오류 발생 시
        """
        raise NotImplementedError("Subclass must implement 'provide' method")


class FileProvider(BaseProvider[TInput, TOutput], ABC):
    """
    파일 Provider 베이스 클래스

    JSON 읽기와 텍스트 쓰기를 공통 예외 규칙으로 감쌉니다.
    """

    def resolve(self, path: str | Path) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and self.base_dir is not None:
            candidate = self.base_dir / candidate
        return candidate

    def read_json(self, path: str | Path) -> Any:
        resolved = self.resolve(path)
        if not resolved.is_file():
            raise NotFoundException(
                f"File not found: {resolved}",
                details={"path": str(resolved)},
            )
        try:
            with resolved.open("r", encoding="utf-8") as handle:
                return json.load(handle)
        except json.JSONDecodeError as e:
            raise ProviderException(
                f"Invalid JSON in {resolved}: {e.msg} (line {e.lineno})",
                details={"path": str(resolved), "line": e.lineno},
            )
        except OSError as e:
            raise ProviderException(
                f"Cannot read {resolved}: {str(e)}",
                details={"path": str(resolved)},
            )

    def write_text(self, path: str | Path, content: str) -> Path:
        resolved = self.resolve(path)
        try:
            resolved.parent.mkdir(parents=True, exist_ok=True)
            # newline="" keeps "\n" on every platform
            with resolved.open("w", encoding="utf-8", newline="") as handle:
                handle.write(content)
        except OSError as e:
            raise ProviderException(
                f"Cannot write {resolved}: {str(e)}",
                details={"path": str(resolved)},
            )
        logger.debug(f"Wrote {resolved}", extra={"path": str(resolved), "bytes": len(content)})
        return resolved


class ArtifactWriter(FileProvider[ArtifactInput, ArtifactOutput]):
    """
    산출물 Writer

    Formatter가 만든 텍스트(CSV, JSON, SVG)를 경로에 씁니다.
    """

    async def provide(self, input_data: ArtifactInput) -> ArtifactOutput:
        path = self.write_text(input_data.path, input_data.content)
        return ArtifactOutput(path=str(path), bytes_written=len(input_data.content.encode("utf-8")))
