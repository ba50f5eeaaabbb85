"""
bench-regret / bench-offline / bench-scale

설정 파일(--config)을 읽고 CLI 플래그로 덮어쓴 뒤 ExperimentService를 실행합니다.
--out은 결과 디렉토리이며 run manifest도 그곳에 씁니다.
"""

import argparse
from functools import partial

from chmcts.app.core.context import RunContext
from chmcts.app.cli.common import (
    add_model_source,
    add_prune_option,
    add_run_options,
    model_source,
    nonnegative_int,
    run_command,
)
from chmcts.app.domain.selection.calculators import StrategyFactory
from chmcts.app.domain.evaluation.models import ExperimentKind, RegretEstimator
from chmcts.app.domain.evaluation.schemas import ExperimentOverrides, ExperimentRequest
from chmcts.app.domain.evaluation.service import EXPERIMENT_SERVICES


def column_range(text: str) -> list[int]:
    """'7' → [7], '3-20' → [3, …, 20]"""
    try:
        if "-" in text:
            low, high = (int(part) for part in text.split("-", 1))
            if low > high:
                raise ValueError
            return list(range(low, high + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected C or A-B column range, got '{text}'")


def register(subparsers: argparse._SubParsersAction) -> None:
    for kind, help_text in (
        (ExperimentKind.REGRET, "온라인 누적 선형 맥락 후회"),
        (ExperimentKind.OFFLINE, "백업 수 대비 루트 하이퍼볼륨"),
        (ExperimentKind.SCALE, "열 수 대비 하이퍼볼륨 비율"),
    ):
        parser = subparsers.add_parser(f"bench-{kind.value}", help=help_text)
        parser.add_argument("--config", metavar="PATH", help="실험 설정 JSON")
        if kind is not ExperimentKind.SCALE:
            add_model_source(parser, required=False)
        parser.add_argument(
            "--strategy",
            dest="strategies",
            action="append",
            choices=StrategyFactory.names(),
            help="전략 (여러 번 지정 가능)",
        )
        if kind is ExperimentKind.REGRET:
            parser.add_argument("--trials", type=nonnegative_int, help="반복마다의 시행 수")
            parser.add_argument(
                "--estimator",
                type=RegretEstimator,
                choices=list(RegretEstimator),
                help="후회 추정 방식 (realized | exact)",
            )
        else:
            parser.add_argument(
                "--backup-budget", type=nonnegative_int, help="반복마다의 백업 예산"
            )
        if kind is ExperimentKind.SCALE:
            parser.add_argument(
                "--columns",
                type=column_range,
                nargs="+",
                metavar="C",
                help="열 수 목록 또는 범위 (예: 3-20)",
            )
            parser.add_argument(
                "--noise", dest="noises", type=float, nargs="+", metavar="P", help="해류 확률들"
            )
        parser.add_argument("--replications", type=int, help="반복 실행 수")
        parser.add_argument("--exploration", type=float, help="UCB 탐험 상수 C")
        add_prune_option(parser, default=None)
        parser.add_argument("--out", metavar="DIR", help="결과 디렉토리")
        add_run_options(parser, workers=True)
        parser.set_defaults(handler=partial(handle, kind))


async def handle(kind: ExperimentKind, args: argparse.Namespace, argv: list[str]) -> int:
    context = RunContext.create(
        args.command, seed=args.seed, workers=args.workers, out_dir=args.out
    )
    source = model_source(args) if kind is not ExperimentKind.SCALE else None
    columns = getattr(args, "columns", None)
    overrides = ExperimentOverrides(
        fixture=source.fixture if source else None,
        model=source.path if source else None,
        strategies=args.strategies,
        trials=getattr(args, "trials", None),
        backup_budget=getattr(args, "backup_budget", None),
        replications=args.replications,
        estimator=getattr(args, "estimator", None),
        prune=args.prune,
        exploration=args.exploration,
        columns=[c for chunk in columns for c in chunk] if columns else None,
        noises=getattr(args, "noises", None),
        out_dir=args.out,
    )
    request = ExperimentRequest(experiment=kind, config_path=args.config, overrides=overrides)
    service = EXPERIMENT_SERVICES[kind](context)
    return await run_command(context, argv, service, request)
