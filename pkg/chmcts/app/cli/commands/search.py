"""search: CHMCTS 탐색 한 번 (시행 / 백업 / 시간 예산)"""

import argparse

from chmcts.app.core.context import RunContext
from chmcts.app.cli.common import (
    add_model_source,
    add_prune_option,
    add_run_options,
    manifest_dir_for,
    model_source,
    nonnegative_int,
    run_command,
)
from chmcts.app.domain.geometry.models import PruneMode
from chmcts.app.domain.search.models import SearchBudget
from chmcts.app.domain.search.schemas import SearchRequest
from chmcts.app.domain.search.service import SearchService
from chmcts.app.domain.selection.calculators import StrategyFactory


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("search", help="CHMCTS 트리 탐색")
    add_model_source(parser)
    parser.add_argument(
        "--strategy", choices=StrategyFactory.names(), default="zooming", help="행동 선택 전략"
    )
    budget = parser.add_mutually_exclusive_group(required=True)
    budget.add_argument("--trials", type=nonnegative_int, help="시행 수")
    budget.add_argument("--backup-budget", type=nonnegative_int, help="백업 수")
    budget.add_argument("--seconds", type=float, help="벽시계 시간 (초)")
    add_prune_option(parser, default=PruneMode.CCS)
    parser.add_argument(
        "--no-labelling", action="store_true", help="수렴한 하위 트리도 계속 탐색"
    )
    parser.add_argument("--exploration", type=float, default=None, help="UCB 탐험 상수 C")
    parser.add_argument("--out", metavar="PATH", help="결과 JSON 경로")
    parser.add_argument("--snapshot", metavar="PATH", help="트리 스냅샷 JSON 경로")
    parser.add_argument("--front-csv", metavar="PATH", help="루트 값 집합을 CSV로 저장")
    parser.add_argument("--dump-balls", metavar="PATH", help="루트 CZT 공 CSV 경로 (zooming)")
    parser.add_argument(
        "--compare-exact", action="store_true", help="CHVI 정답 CCS와 일치하는지 확인"
    )
    add_run_options(parser)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, argv: list[str]) -> int:
    context = RunContext.create(args.command, seed=args.seed, out_dir=manifest_dir_for(args.out))
    request = SearchRequest(
        source=model_source(args),
        strategy=args.strategy,
        budget=SearchBudget(
            trials=args.trials, backups=args.backup_budget, seconds=args.seconds
        ),
        prune=args.prune,
        labelling=not args.no_labelling,
        exploration=args.exploration,
        out=args.out,
        snapshot=args.snapshot,
        front_csv=args.front_csv,
        dump_balls=args.dump_balls,
        compare_exact=args.compare_exact,
    )
    return await run_command(context, argv, SearchService(context), request)
