"""
Run Tracking

명령 실행 하나를 추적합니다.
- 시작/종료/소요 시간 로깅 (run_id 포함)
- 해석된 설정과 파생 시드를 run manifest 파일로 기록
"""

import json
import platform
import sys
import time
from pathlib import Path
from typing import Any

from chmcts import __version__
from chmcts.app.core.config import get_settings
from chmcts.app.core.context import RunContext
from chmcts.app.core.logging import get_logger

logger = get_logger(__name__)

MANIFEST_NAME = "run-manifest.json"


class RunTracker:
    """
    명령 실행 추적기

    사용 예시:
        async with RunTracker(context, argv) as tracker:
            result = await service.execute(request)
            tracker.status = "ok" if result.success else "failed"
    """

    def __init__(self, context: RunContext, argv: list[str]):
        self.context = context
        self.argv = list(argv)
        self.status = "ok"
        self.manifest_path: Path | None = None
        self._start = 0.0

    async def __aenter__(self) -> "RunTracker":
        self._start = time.perf_counter()
        logger.info(
            f"Starting '{self.context.command}' (seed={self.context.master_seed}, "
            f"workers={self.context.workers})",
            extra={
                "run_id": self.context.run_id,
                "command": self.context.command,
                "seed": self.context.master_seed,
            },
        )
        return self

    async def __aexit__(self, exc_type, exc, tb) -> None:
        elapsed = time.perf_counter() - self._start
        if exc is not None:
            self.status = "error"
            logger.error(
                f"'{self.context.command}' - ERROR: {exc} ({elapsed:.3f}s)",
                extra={"run_id": self.context.run_id, "error": str(exc), "elapsed": elapsed},
                exc_info=True,
            )
        else:
            logger.info(
                f"'{self.context.command}' finished - {self.status} ({elapsed:.3f}s)",
                extra={"run_id": self.context.run_id, "status": self.status, "elapsed": elapsed},
            )
        self.manifest_path = self.write_manifest(elapsed)

    def manifest(self, elapsed: float) -> dict[str, Any]:
        settings = get_settings()
        return {
            "run_id": self.context.run_id,
            "command": self.context.command,
            "argv": self.argv,
            "status": self.status,
            "elapsed_seconds": round(elapsed, 3),
            "master_seed": self.context.master_seed,
            "workers": self.context.workers,
            "out_dir": str(self.context.out_dir),
            "resolved": self.context.resolved,
            "settings": settings.model_dump(mode="json"),
            "versions": {
                "chmcts": __version__,
                "python": sys.version.split()[0],
                "platform": platform.platform(),
            },
        }

    def write_manifest(self, elapsed: float) -> Path | None:
        path = self.context.out_dir / MANIFEST_NAME
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(
                json.dumps(self.manifest(elapsed), ensure_ascii=False, indent=2, default=str)
                + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            logger.warning(
                f"Could not write run manifest: {e}",
                extra={"run_id": self.context.run_id, "path": str(path)},
            )
            return None
        return path
