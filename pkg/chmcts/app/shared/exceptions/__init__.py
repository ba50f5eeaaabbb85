"""
공통 예외 클래스

도메인 전반에서 사용할 수 있는 표준화된 예외를 정의합니다.
HTTP 상태 코드 대신 CLI 종료 코드를 가집니다 (1: 사용법 오류, 2: 실행 오류).
"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class ApplicationException(Exception):
    """
    애플리케이션 기본 예외

    모든 비즈니스 로직 예외의 기반 클래스입니다.
    종료 코드와 상세 정보를 포함합니다.
    """

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_RUNTIME,
        details: Optional[dict[str, Any]] = None,
    ):
        """
        Args:
            message: 예외 메시지
            exit_code: CLI 종료 코드
            details: 추가 상세 정보
        """
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}


class UsageException(ApplicationException):
    """
    사용법 오류 예외

    잘못된 플래그 조합, 알 수 없는 전략/fixture 이름 등에 사용합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class ValidationException(ApplicationException):
    """
    유효성 검증 실패 예외

    모델/설정 파일 내용이나 가중치 벡터 등 입력 데이터 검증이 실패했을 때 발생합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class ModelException(ValidationException):
    """
    MOMDP 불변식 위반 예외

    위반 목록 전체를 details["violations"]에 담습니다.
    """

    def __init__(self, message: str, violations: list[Any]):
        super().__init__(
            message,
            details={"violations": [str(v) for v in violations]},
        )
        self.violations = violations


class NotFoundException(ApplicationException):
    """
    리소스 없음 예외

    모델/설정 파일 경로가 존재하지 않을 때 발생합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_USAGE, details=details)


class BusinessLogicException(ApplicationException):
    """
    비즈니스 로직 예외

    정답 CCS 계산이 너무 큰 인스턴스, 0 예산 탐색 등 실행 불가능한 요청에 사용합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_RUNTIME, details=details)


class ProviderException(ApplicationException):
    """
    Provider 계층 예외

    파일 읽기/쓰기 등 데이터 제공 중 오류가 발생했을 때 사용합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_RUNTIME, details=details)


class CalculatorException(ApplicationException):
    """
    Calculator 계층 예외

    계산 로직에서 오류가 발생했을 때 사용합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_RUNTIME, details=details)


class FormatterException(ApplicationException):
    """
    Formatter 계층 예외

    포맷팅/직렬화 로직에서 오류가 발생했을 때 사용합니다.
    """

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_RUNTIME, details=details)
