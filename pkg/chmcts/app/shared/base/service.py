"""
BaseService: 서비스 레이어 추상 클래스

Facade Pattern을 통해 Provider, Calculator, Formatter를 조율합니다.
Template Method Pattern을 사용하여 실행 흐름을 정의합니다.
"""

from abc import ABC, abstractmethod
from typing import Any, Generic, TypeVar

from chmcts.app.core.context import RunContext
from chmcts.app.core.logging import get_logger
from chmcts.app.core.workers import WorkerPool
from chmcts.app.shared.exceptions import EXIT_RUNTIME, ApplicationException
from chmcts.app.shared.types import ServiceResult

# 제네릭 타입 변수
TRequest = TypeVar("TRequest")  # 명령 요청 데이터
TResponse = TypeVar("TResponse")  # 명령 응답 데이터
TJob = TypeVar("TJob")
TJobResult = TypeVar("TJobResult")

logger = get_logger(__name__)


class BaseService(ABC, Generic[TRequest, TResponse]):
    """
    Service 추상 베이스 클래스

    책임:
        - 실행 흐름 제어 (orchestration)
        - Provider, Calculator, Formatter 조율
        - 에러 처리 및 로깅

    일반적인 흐름:
        1. 요청 데이터 검증 (validate_request)
        2. 데이터 조회 (Provider)
        3. 계산 실행 (Calculator)
        4. 결과 포맷팅/저장 (Formatter, Provider)
        5. 결과 반환
    """

    def __init__(self, context: RunContext):
        """
        Args:
            context: 실행 컨텍스트 (run id, 시드, 워커 수, 출력 경로)
        """
        self.context = context

    @abstractmethod
    async def execute(self, request: TRequest, **kwargs: Any) -> ServiceResult[TResponse]:
        """
        서비스의 주요 로직을 실행합니다.

        Returns:
            ServiceResult[TResponse]: 실행 결과
        """
        raise NotImplementedError("Subclass must implement 'execute' method")

    async def validate_request(self, request: TRequest) -> None:
        """
        요청 데이터의 유효성을 검증합니다. 기본 구현은 아무것도 하지 않습니다.

        Raises:
            ValidationException / UsageException: 유효성 검증 실패 시
        """
        pass

    async def before_execute(self, request: TRequest) -> None:
        logger.debug(
            f"Executing {type(self).__name__}",
            extra={"run_id": self.context.run_id},
        )

    async def after_execute(
        self,
        request: TRequest,
        result: ServiceResult[TResponse]
    ) -> None:
        pass

    async def handle_error(self, error: Exception, request: TRequest) -> ServiceResult[TResponse]:
        """
        에러를 ServiceResult 실패로 변환합니다.

        ApplicationException은 종료 코드와 details를 그대로 전달하고,
        예상치 못한 예외는 traceback과 함께 기록한 뒤 실행 오류(2)로 처리합니다.
        """
        if isinstance(error, ApplicationException):
            logger.warning(
                f"Application exception: {error.message}",
                extra={
                    "run_id": self.context.run_id,
                    "exception_type": type(error).__name__,
                    "exit_code": error.exit_code,
                    "details": error.details,
                },
            )
            return ServiceResult.fail(
                error.message,
                metadata={
                    "exit_code": error.exit_code,
                    "error_type": type(error).__name__,
                    "details": error.details,
                },
            )

        logger.error(
            f"Unexpected error: {str(error)}",
            extra={
                "run_id": self.context.run_id,
                "exception_type": type(error).__name__,
            },
            exc_info=True,
        )
        return ServiceResult.fail(
            f"Internal error: {type(error).__name__}: {error}",
            metadata={"exit_code": EXIT_RUNTIME, "error_type": type(error).__name__},
        )


class BatchService(BaseService[TRequest, TResponse], ABC):
    """
    배치 작업 특화 Service

    반복 실행(replication) 작업을 워커 풀에 분배합니다.
    """

    async def execute_batch(
        self,
        runner: Any,
        jobs: list[TJob],
    ) -> list[TJobResult]:
        """
        여러 작업을 워커 풀에서 실행하고 입력 순서대로 결과를 돌려줍니다.

        Args:
            runner: 피클 가능한 최상위 호출 객체 (job → result)
            jobs: 작업 리스트

        Returns:
            list: 각 작업의 결과 (jobs와 같은 순서)
        """
        async with WorkerPool(self.context.workers) as pool:
            return await pool.map(runner, jobs)
