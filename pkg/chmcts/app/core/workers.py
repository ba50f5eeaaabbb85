"""
워커 풀

asyncio에서 ProcessPoolExecutor를 구동합니다. workers == 1이면 같은 프로세스에서
순서대로 실행하므로 테스트와 디버깅에서 traceback이 그대로 보입니다.
"""

import asyncio
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

from chmcts.app.core.logging import get_logger

logger = get_logger(__name__)


class WorkerPool:
    """
    반복 실행 작업용 프로세스 풀

    사용 예시:
        async with WorkerPool(4) as pool:
            results = await pool.map(RegretReplicationRunner.run_job, jobs)
    """

    def __init__(self, workers: int):
        self.workers = max(1, int(workers))
        self._executor: ProcessPoolExecutor | None = None

    async def __aenter__(self) -> "WorkerPool":
        if self.workers > 1:
            self._executor = ProcessPoolExecutor(max_workers=self.workers)
        return self

    async def __aexit__(self, *exc_info: Any) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True, cancel_futures=True)
            self._executor = None

    async def map(self, fn: Callable[[Any], Any], jobs: Sequence[Any]) -> list[Any]:
        """
        작업들을 실행하고 입력 순서대로 결과를 반환합니다.

        Args:
            fn: 피클 가능한 최상위 함수 또는 정적 메서드
            jobs: 작업 목록
        """
        if not jobs:
            return []
        if self._executor is None:
            return [fn(job) for job in jobs]

        logger.info(f"Dispatching {len(jobs)} jobs to {self.workers} workers")
        loop = asyncio.get_running_loop()
        futures = [loop.run_in_executor(self._executor, fn, job) for job in jobs]
        return list(await asyncio.gather(*futures))
