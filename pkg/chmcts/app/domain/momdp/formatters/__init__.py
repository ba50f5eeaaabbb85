"""
MOMDP Domain Formatters

Momdp → 모델 파일 JSON. 같은 모델은 바이트 단위로 같은 파일이 됩니다.
"""

from typing import Any

from chmcts.app.shared.base import JSONFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.schemas import ModelFormatterInput


class MomdpJSONFormatter(JSONFormatter[ModelFormatterInput, TextOutput]):
    """모델 파일 형식으로 직렬화합니다 (선택 메타데이터는 값이 있을 때만)."""

    def to_document(self, model: Momdp) -> dict[str, Any]:
        document: dict[str, Any] = {
            "name": model.name,
            "num_states": model.num_states,
            "num_actions": model.num_actions,
            "num_objectives": model.num_objectives,
            "horizon": model.horizon,
            "initial_state": model.initial_state,
            "terminals": sorted(model.terminals),
            "rewards": [
                {"s": s, "a": a, "vector": [float(x) for x in vector]}
                for (s, a), vector in sorted(model.rewards.items())
            ],
            "transitions": [
                {
                    "s": s,
                    "a": a,
                    "successors": [{"s2": s2, "p": float(p)} for s2, p in successors],
                }
                for (s, a), successors in sorted(model.transitions.items())
            ],
            "arrival_rewards": [
                {"s": s, "vector": [float(x) for x in vector]}
                for s, vector in sorted(model.arrival_rewards.items())
            ]
            or None,
            "terminal_bonus": model.terminal_bonus,
            "reference_point": model.reference_point,
            "utopian_point": model.utopian_point,
            "return_bound": model.return_bound,
        }
        return self.remove_null_fields(document)

    async def format(self, input_data: ModelFormatterInput) -> TextOutput:
        return TextOutput(
            content=self.dumps(self.to_document(input_data.model)),
            media_type="application/json",
        )


__all__ = ["MomdpJSONFormatter"]
