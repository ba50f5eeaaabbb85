"""solve: CHVI로 정답 CCS(또는 파레토 전선) 계산"""

import argparse

from chmcts.app.core.context import RunContext
from chmcts.app.cli.common import (
    add_model_source,
    add_prune_option,
    add_run_options,
    manifest_dir_for,
    model_source,
    run_command,
)
from chmcts.app.domain.geometry.models import PruneMode
from chmcts.app.domain.chvi.schemas import SolveRequest
from chmcts.app.domain.chvi.service import ChviService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("solve", help="CHVI 정답 풀이")
    add_model_source(parser)
    add_prune_option(parser, default=PruneMode.CCS)
    parser.add_argument("--out", metavar="PATH", help="풀이 JSON 경로")
    parser.add_argument("--front-csv", metavar="PATH", help="루트 CCS를 CSV로 저장")
    parser.add_argument(
        "--dump-tables", action="store_true", help="모든 (s, t)의 𝒱/𝒬 표를 JSON에 포함"
    )
    parser.add_argument(
        "--weights",
        type=float,
        nargs="+",
        metavar="W",
        help="이 가중치로 정책을 추출해 평가",
    )
    add_run_options(parser)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, argv: list[str]) -> int:
    context = RunContext.create(args.command, seed=args.seed, out_dir=manifest_dir_for(args.out))
    request = SolveRequest(
        source=model_source(args),
        prune=args.prune,
        out=args.out,
        front_csv=args.front_csv,
        dump_tables=args.dump_tables,
        weights=args.weights,
    )
    return await run_command(context, argv, ChviService(context), request)
