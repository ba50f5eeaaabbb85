"""
Evaluation Domain Formatters

- RegretCSVFormatter: trial,strategy,replication,context_w0,cum_regret
- OfflineCSVFormatter: backups,strategy,replication,hypervolume
- ScaleCSVFormatter: columns,noise,strategy,ratio,replication
- ExperimentSummaryJSONFormatter: 요약 JSON
- SvgChartFormatter: matplotlib 선 차트 (SVG)

CSV가 기준 산출물입니다. 행은 정렬되고 float은 repr로 적어 같은 시드면 바이트 단위로 같습니다.
"""

import io
from typing import Any

from matplotlib import rc_context
from matplotlib.figure import Figure

from chmcts.app.shared.base import ChartDataFormatter, CSVFormatter, JSONFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.evaluation.schemas import (
    ChartInput,
    OfflineTableInput,
    RegretTableInput,
    ScaleTableInput,
    SummaryDocumentInput,
)


class RegretCSVFormatter(CSVFormatter[RegretTableInput, TextOutput]):
    """trial은 1부터 센 완료 시행 수이고 cum_regret은 그 시행까지의 누적 LCR입니다."""

    def get_csv_headers(self) -> list[str]:
        return ["trial", "strategy", "replication", "context_w0", "cum_regret"]

    def to_csv_row(self, output_data: Any) -> list[Any]:
        return list(output_data)

    async def format(self, input_data: RegretTableInput) -> TextOutput:
        records = []
        for curve in sorted(input_data.curves, key=lambda c: (c.strategy, c.replication)):
            cumulative = curve.cumulative.tolist()
            records.extend(
                (k + 1, curve.strategy, curve.replication, w0, total)
                for k, (w0, total) in enumerate(zip(curve.context_w0, cumulative))
            )
        return TextOutput(content=self.render_csv(records), media_type="text/csv")


class OfflineCSVFormatter(CSVFormatter[OfflineTableInput, TextOutput]):
    def get_csv_headers(self) -> list[str]:
        return ["backups", "strategy", "replication", "hypervolume"]

    def to_csv_row(self, output_data: Any) -> list[Any]:
        return list(output_data)

    async def format(self, input_data: OfflineTableInput) -> TextOutput:
        records = sorted(
            (
                (checkpoint.backups, run.strategy, run.replication, checkpoint.hypervolume)
                for run in input_data.runs
                for checkpoint in run.checkpoints
            ),
            key=lambda r: (r[1], r[2], r[0]),
        )
        return TextOutput(content=self.render_csv(records), media_type="text/csv")


class ScaleCSVFormatter(CSVFormatter[ScaleTableInput, TextOutput]):
    def get_csv_headers(self) -> list[str]:
        return ["columns", "noise", "strategy", "ratio", "replication"]

    def to_csv_row(self, output_data: Any) -> list[Any]:
        return [
            output_data.columns,
            output_data.noise,
            output_data.strategy,
            output_data.ratio,
            output_data.replication,
        ]

    async def format(self, input_data: ScaleTableInput) -> TextOutput:
        rows = sorted(
            input_data.rows, key=lambda r: (r.columns, r.noise, r.strategy, r.replication)
        )
        return TextOutput(content=self.render_csv(rows), media_type="text/csv")


class ExperimentSummaryJSONFormatter(JSONFormatter[SummaryDocumentInput, TextOutput]):
    async def format(self, input_data: SummaryDocumentInput) -> TextOutput:
        response = input_data.response
        document = {
            "experiment": response.experiment.value,
            "target": response.target,
            "config": input_data.config.model_dump(mode="json", exclude_none=True),
            "summaries": response.summaries,
            "ground_truth": response.ground_truth,
            "files": response.files,
        }
        return TextOutput(
            content=self.dumps(self.remove_null_fields(document)),
            media_type="application/json",
        )


class SvgChartFormatter(ChartDataFormatter[ChartInput, TextOutput]):
    """
    단일 패널 선 차트

    시리즈마다 평균선과 신뢰구간 띠를 그립니다. 점이 하나뿐인 시리즈(CHVI)는 표식으로 그립니다.
    SVG 메타데이터의 날짜를 빼고 id 해시 솔트를 고정해 같은 데이터면 같은 파일이 나옵니다.
    """

    figure_size = (7.0, 4.5)

    def format_for_chart(self, input_data: ChartInput, chart_type: str) -> dict[str, Any]:
        return {
            "type": chart_type,
            "title": input_data.title,
            "x_label": input_data.x_label,
            "y_label": input_data.y_label,
            "series": [s.model_dump() for s in input_data.series],
        }

    async def format(self, input_data: ChartInput) -> TextOutput:
        chart = self.format_for_chart(input_data, "line")
        figure = Figure(figsize=self.figure_size)
        axes = figure.add_subplot(1, 1, 1)
        for series in chart["series"]:
            single = len(series["x"]) == 1
            (line,) = axes.plot(
                series["x"],
                series["y"],
                label=series["label"],
                marker="o" if single else None,
                linewidth=1.2,
            )
            if not single and series["lower"] is not None:
                axes.fill_between(
                    series["x"],
                    series["lower"],
                    series["upper"],
                    color=line.get_color(),
                    alpha=0.2,
                    linewidth=0,
                )
        axes.set_title(chart["title"])
        axes.set_xlabel(chart["x_label"])
        axes.set_ylabel(chart["y_label"])
        axes.grid(True, alpha=0.3)
        if chart["series"]:
            axes.legend(loc="best", fontsize="small")
        figure.tight_layout()

        buffer = io.StringIO()
        with rc_context({"svg.hashsalt": "chmcts", "svg.fonttype": "none"}):
            figure.savefig(buffer, format="svg", metadata={"Date": None})
        return TextOutput(content=buffer.getvalue(), media_type="image/svg+xml")


__all__ = [
    "RegretCSVFormatter",
    "OfflineCSVFormatter",
    "ScaleCSVFormatter",
    "ExperimentSummaryJSONFormatter",
    "SvgChartFormatter",
]
