"""gen-env: GDST(c, p) 인스턴스를 모델 JSON과 사이드카 메타데이터로 저장"""

import argparse

from chmcts.app.core.context import RunContext
from chmcts.app.cli.common import add_run_options, manifest_dir_for, run_command
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.gdst.schemas import GenEnvRequest
from chmcts.app.domain.gdst.service import GdstService


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen-env", help="GDST 인스턴스 생성")
    parser.add_argument("--columns", type=int, required=True, help="열 수 c")
    parser.add_argument("--noise", type=float, default=0.0, help="해류 확률 p")
    parser.add_argument("--horizon", type=int, default=None, help="지평 H (기본 100·c)")
    parser.add_argument("--out", required=True, metavar="PATH", help="모델 JSON 경로")
    parser.add_argument("--raw", action="store_true", help="정규화 전 원 단위 모델을 저장")
    parser.add_argument("--ascii", action="store_true", help="ASCII 격자를 요약에 포함")
    add_run_options(parser)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, argv: list[str]) -> int:
    # --seed는 생성 시드이자 마스터 시드입니다
    context = RunContext.create(args.command, seed=args.seed, out_dir=manifest_dir_for(args.out))
    config = GdstConfig(
        columns=args.columns,
        noise=args.noise,
        seed=context.master_seed,
        horizon=args.horizon,
    )
    request = GenEnvRequest(config=config, out=args.out, raw=args.raw, ascii=args.ascii)
    return await run_command(context, argv, GdstService(context), request)
