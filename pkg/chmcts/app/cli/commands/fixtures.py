"""fixtures: 체크인된 모델 목록 또는 내보내기"""

import argparse
from pathlib import Path

from chmcts.app.core.context import RunContext
from chmcts.app.cli.common import manifest_dir_for, require, run_command
from chmcts.app.domain.momdp.service import FixtureCatalogService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("fixtures", help="fixture 목록 / 내보내기")
    parser.add_argument("--name", default=None, help="내보낼 fixture 이름 (없으면 목록)")
    parser.add_argument("--out", metavar="PATH", help="--name의 모델 JSON을 쓸 경로")
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, argv: list[str]) -> int:
    context = RunContext.create(args.command, out_dir=manifest_dir_for(args.out))
    require(args.out is None or args.name is not None, "fixtures --out needs --name")
    out_path = Path(args.out) if args.out else None
    return await run_command(
        context, argv, FixtureCatalogService(context), args.name, out_path=out_path
    )
