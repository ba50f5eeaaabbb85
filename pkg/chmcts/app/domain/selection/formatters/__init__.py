"""
Selection Domain Formatters

- BallCSVFormatter: CZT 활성 공 덤프 (중심 가중치, 행동, 반지름, n, ν)
"""

from typing import Any

from chmcts.app.shared.base import CSVFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.selection.models import Ball
from chmcts.app.domain.selection.schemas import BallDumpInput


class BallCSVFormatter(CSVFormatter[BallDumpInput, TextOutput]):
    """헤더: state,depth,w0..w{D-1},action,radius,pulls,mean (활성화 순서)."""

    def __init__(self, dimension: int = 2):
        self.dimension = dimension
        self._where: tuple[int, int] = (0, 0)

    def get_csv_headers(self) -> list[str]:
        weights = [f"w{i}" for i in range(self.dimension)]
        return ["state", "depth", *weights, "action", "radius", "pulls", "mean"]

    def to_csv_row(self, output_data: Any) -> list[Any]:
        ball: Ball = output_data
        state, depth = self._where
        return [
            state,
            depth,
            *[float(x) for x in ball.center_weight],
            ball.center_action,
            ball.radius,
            ball.pulls,
            ball.mean_reward,
        ]

    async def format(self, input_data: BallDumpInput) -> TextOutput:
        self.dimension = input_data.ball_set.dimension
        self._where = (input_data.state, input_data.depth)
        return TextOutput(content=self.render_csv(input_data.ball_set.balls), media_type="text/csv")


__all__ = ["BallCSVFormatter"]
