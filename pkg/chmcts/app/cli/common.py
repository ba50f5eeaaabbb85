"""
CLI 공통 유틸리티

- 공통 플래그 (모델 출처, 시드, 워커 수)
- 서비스 실행 + RunTracker + 표준 출력 요약
"""

import argparse
import sys
from pathlib import Path
from typing import Any

from pydantic import BaseModel
from rich.console import Console

from chmcts.app.core.context import RunContext
from chmcts.app.core.logging import get_logger, log_with_context
from chmcts.app.core.tracking import RunTracker
from chmcts.app.shared.base import BaseService, JSONFormatter
from chmcts.app.shared.exceptions import UsageException
from chmcts.app.shared.types import FormatterInput
from chmcts.app.domain.geometry.models import PruneMode
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.momdp.schemas import ModelSourceRequest

logger = get_logger(__name__)

# 로그와 오류 메시지는 stderr, 요약 JSON은 stdout
err_console = Console(stderr=True)


# ====================
# Argument Groups
# ====================


def add_model_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--model", metavar="PATH", help="MOMDP 모델 JSON 파일")
    group.add_argument("--fixture", metavar="NAME", help="체크인된 fixture 이름 (예: example1)")


def add_run_options(parser: argparse.ArgumentParser, workers: bool = False) -> None:
    parser.add_argument("--seed", type=nonnegative_int, default=None, help="마스터 시드")
    if workers:
        parser.add_argument(
            "--workers",
            type=int,
            default=None,
            help="워커 프로세스 수 (0 = CPU 수, 1 = 같은 프로세스)",
        )


def add_prune_option(parser: argparse.ArgumentParser, default: PruneMode | None) -> None:
    parser.add_argument(
        "--prune",
        type=PruneMode,
        choices=list(PruneMode),
        default=default,
        help="값 집합 가지치기 (ccs | pareto)",
    )


def nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def model_source(args: argparse.Namespace) -> ModelSourceRequest | None:
    if args.model is None and args.fixture is None:
        return None
    return ModelSourceRequest(fixture=args.fixture, path=args.model)


def manifest_dir_for(out_file: str | None) -> Path | None:
    """파일 하나를 쓰는 명령은 manifest를 그 파일 옆에 둡니다."""
    return Path(out_file).parent if out_file else None


# ====================
# Summary Output
# ====================


class RunSummaryInput(FormatterInput):
    command: str
    run_id: str
    result: Any
    manifest: str | None = None


class RunSummaryFormatter(JSONFormatter[RunSummaryInput, TextOutput]):
    """stdout에 쓰는 기계 판독용 실행 요약"""

    async def format(self, input_data: RunSummaryInput) -> TextOutput:
        result = input_data.result
        document: dict[str, Any] = {
            "command": input_data.command,
            "run_id": input_data.run_id,
            "status": "ok" if result.success else "failed",
            "exit_code": result.exit_code,
            "manifest": input_data.manifest,
        }
        if result.success:
            document["result"] = self._payload(result.data)
        else:
            document["error"] = result.error
            document["details"] = (result.metadata or {}).get("details")
        return TextOutput(content=self.dumps(self.remove_null_fields(document)))

    def _payload(self, data: Any) -> Any:
        if isinstance(data, BaseModel):
            return data.model_dump(mode="json", exclude_none=True)
        if isinstance(data, list):
            return [self._payload(item) for item in data]
        return data


async def run_command(
    context: RunContext,
    argv: list[str],
    service: BaseService,
    request: Any,
    **kwargs: Any,
) -> int:
    """
    서비스를 RunTracker 안에서 실행하고 요약을 출력합니다.

    Returns:
        int: 종료 코드 (0 성공, 1 사용 오류, 2 실행 오류)
    """
    async with RunTracker(context, argv) as tracker:
        result = await service.execute(request, **kwargs)
        tracker.status = "ok" if result.success else "failed"

    manifest = str(tracker.manifest_path) if tracker.manifest_path else None
    summary = await RunSummaryFormatter().format(
        RunSummaryInput(
            command=context.command, run_id=context.run_id, result=result, manifest=manifest
        )
    )
    sys.stdout.write(summary.content)
    sys.stdout.flush()

    if not result.success:
        err_console.print(f"[bold red]error[/bold red]: {result.error}", highlight=False)
        log_with_context(
            logger,
            "DEBUG",
            f"'{context.command}' exits with {result.exit_code}",
            run_id=context.run_id,
            error_type=(result.metadata or {}).get("error_type"),
        )
    return result.exit_code


def require(condition: bool, message: str) -> None:
    if not condition:
        raise UsageException(message)
