"""
CHMCTS 명령줄 진입점

종료 코드: 0 성공, 1 사용 오류 (플래그, 설정, 입력 파일), 2 실행 오류
"""

import asyncio
import sys

# 1️⃣ Rich traceback (가장 먼저)
from rich.console import Console
from rich.traceback import install

from chmcts.app.core.config import get_settings

install(show_locals=get_settings().DEBUG)

# 2️⃣ App 내부 모듈
from pydantic import ValidationError  # noqa: E402

from chmcts.app.core.logging import get_logger  # noqa: E402
from chmcts.app.shared.exceptions import (  # noqa: E402
    EXIT_RUNTIME,
    EXIT_USAGE,
    ApplicationException,
)
from chmcts.app.cli.router import dispatch  # noqa: E402

logger = get_logger(__name__)
err_console = Console(stderr=True)


def main(argv: list[str] | None = None) -> int:
    """
    명령 하나를 실행하고 종료 코드를 반환합니다.

    서비스 실패는 각 명령이 종료 코드로 돌려주고,
    여기서는 서비스 밖(인자 해석, 요청 검증)에서 난 예외만 처리합니다.
    """
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        return asyncio.run(dispatch(args))
    except ApplicationException as e:
        err_console.print(f"[bold red]error[/bold red]: {e.message}", highlight=False)
        return e.exit_code
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'request'}: {err['msg']}"
            for err in e.errors()
        )
        err_console.print(f"[bold red]invalid arguments[/bold red]: {problems}", highlight=False)
        return EXIT_USAGE
    except KeyboardInterrupt:
        err_console.print("[yellow]interrupted[/yellow]")
        return 130
    except Exception:
        logger.exception("Unhandled error")
        return EXIT_RUNTIME


def run() -> None:
    """console script 진입점"""
    sys.exit(main())


if __name__ == "__main__":
    run()
