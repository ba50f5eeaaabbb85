"""
GDST Domain Formatters

- GdstMetadataFormatter: 사이드카 메타데이터 JSON (격자, 보물, 정규화, z)
- GdstAsciiFormatter: 격자 ASCII 덤프
"""

from chmcts.app.shared.base import BaseFormatter, JSONFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.gdst.schemas import InstanceFormatterInput


class GdstMetadataFormatter(JSONFormatter[InstanceFormatterInput, TextOutput]):
    async def format(self, input_data: InstanceFormatterInput) -> TextOutput:
        instance = input_data.instance
        model = instance.raw_model if input_data.raw else instance.model
        document = {
            "model_file": input_data.model_file,
            "units": "raw" if input_data.raw else "normalized",
            "columns": instance.columns,
            "rows": instance.rows,
            "num_states": instance.num_states,
            "noise": instance.config.noise,
            "seed": instance.config.seed,
            "horizon": instance.horizon,
            "floor": instance.floor,
            "treasures": [t.model_dump() for t in instance.treasures],
            "normalization": instance.normalization.as_dict(),
            "reference_point": model.reference_point,
            "utopian_point": model.utopian_point,
            "actions": ["left", "right", "up", "down"],
        }
        return TextOutput(
            content=self.dumps(self.remove_null_fields(document)),
            media_type="application/json",
        )


class GdstAsciiFormatter(BaseFormatter[InstanceFormatterInput, TextOutput]):
    """S = 시작, . = 물, # = 암반, 숫자 = 보물 값"""

    async def format(self, input_data: InstanceFormatterInput) -> TextOutput:
        instance = input_data.instance
        values = {(t.row, t.column): str(t.value) for t in instance.treasures}
        width = max(len(v) for v in values.values())
        lines = []
        for row in range(instance.rows):
            cells = []
            for column in range(instance.columns):
                if (row, column) in values:
                    cell = values[(row, column)]
                elif row == 0 and column == 0:
                    cell = "S"
                elif instance.is_rock(row, column):
                    cell = "#"
                else:
                    cell = "."
                cells.append(cell.rjust(width))
            lines.append(" ".join(cells))
        return TextOutput(content="\n".join(lines) + "\n")


__all__ = ["GdstMetadataFormatter", "GdstAsciiFormatter"]
