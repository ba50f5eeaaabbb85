"""
Core Logging Configuration

플래너 전역 로깅 설정을 관리합니다.
- Run ID 자동 포함
- 표준 출력은 기계 판독용 요약에 쓰이므로 로그는 stderr로 보냅니다
"""

import logging
import sys
from typing import Any, Dict

from .config import get_settings


# ====================
# Custom Log Formatter
# ====================

class RunIDFormatter(logging.Formatter):
    """
    Run ID를 자동으로 포함하는 로그 포맷터

    로그 형태: [run_id=xxxx] TIME - NAME - LEVEL - MESSAGE
    """

    def format(self, record: logging.LogRecord) -> str:
        run_id = getattr(record, "run_id", "-")

        if run_id != "-" and run_id is not None:
            prefix = f"[run_id={run_id}] "
        else:
            prefix = ""

        return f"{prefix}{super().format(record)}"


# ====================
# Logger Setup
# ====================

def setup_logging(level: str | None = None) -> None:
    """
    로깅 설정을 초기화합니다.

    - stderr 핸들러 설정
    - Run ID 포맷터 적용
    - 로그 레벨 설정 (인자가 없으면 Settings.LOG_LEVEL)
    """
    settings = get_settings()
    resolved = (level or settings.LOG_LEVEL).upper()

    root_logger = logging.getLogger()
    root_logger.setLevel(resolved)

    # 기존 핸들러 제거 (중복 방지)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(resolved)
    console_handler.setFormatter(
        RunIDFormatter(fmt=settings.LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    )
    root_logger.addHandler(console_handler)

    # matplotlib 폰트 탐색 로그는 너무 많음
    logging.getLogger("matplotlib").setLevel(max(logging.WARNING, root_logger.level))

    logging.getLogger(__name__).debug("Logging configuration initialized")


def get_logger(name: str) -> logging.Logger:
    """
    모듈별 로거를 가져옵니다.

    Args:
        name: 로거 이름 (보통 __name__ 사용)

    Returns:
        설정된 로거 인스턴스
    """
    return logging.getLogger(name)


# ====================
# Logging Utilities
# ====================

def log_with_context(
    logger: logging.Logger,
    level: str,
    message: str,
    run_id: str | None = None,
    **kwargs: Any
) -> None:
    """
    Run ID를 포함한 로그를 기록합니다.

    Args:
        logger: 로거 인스턴스
        level: 로그 레벨 (INFO, WARNING, ERROR, etc.)
        message: 로그 메시지
        run_id: Run ID (optional)
        **kwargs: 추가 로그 컨텍스트
    """
    extra: Dict[str, Any] = kwargs.copy()
    if run_id:
        extra["run_id"] = run_id

    log_method = getattr(logger, level.lower(), logger.info)
    log_method(message, extra=extra)
