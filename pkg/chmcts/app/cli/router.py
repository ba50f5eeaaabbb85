"""
CLI 라우터 통합

모든 하위 명령을 하나의 파서로 통합하고 실행할 핸들러를 고릅니다.
"""

import argparse
from typing import NoReturn

from chmcts import __version__
from chmcts.app.core.config import get_settings
from chmcts.app.core.logging import setup_logging
from chmcts.app.shared.exceptions import UsageException
from chmcts.app.cli.commands import bench, fixtures, gen_env, search, solve


class CliArgumentParser(argparse.ArgumentParser):
    """사용 오류를 SystemExit(2) 대신 UsageException(종료 코드 1)으로 바꿉니다."""

    def error(self, message: str) -> NoReturn:
        raise UsageException(f"{self.prog}: {message}")


# 각 명령 모듈은 register(subparsers)로 파서를 추가하고 handler를 지정합니다
COMMAND_MODULES = (gen_env, solve, search, bench, fixtures)


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="chmcts",
        description="Convex Hull Monte-Carlo Tree-Search for finite-horizon multi-objective MDPs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        default=None,
        help="로그 레벨 (기본: LOG_LEVEL 설정)",
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, metavar="COMMAND", parser_class=CliArgumentParser
    )
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


async def dispatch(argv: list[str]) -> int:
    """
    argv를 해석하고 선택된 명령을 실행합니다.

    Raises:
        UsageException: 알 수 없는 명령이나 플래그
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or get_settings().LOG_LEVEL)
    return await args.handler(args, argv)
