"""
CHVI Domain Formatters

풀이 결과 JSON: 루트 CCS, 하이퍼볼륨, 가지치기 모드, 백업 수.
전체 표는 요청할 때만 포함합니다 (크기가 큼).
"""

from typing import Any

from chmcts.app.shared.base import JSONFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.chvi.schemas import SolutionFormatterInput


class SolutionJSONFormatter(JSONFormatter[SolutionFormatterInput, TextOutput]):
    async def format(self, input_data: SolutionFormatterInput) -> TextOutput:
        solution = input_data.solution
        document: dict[str, Any] = {
            "model": solution.model.name,
            "prune": solution.prune_mode.value,
            "backup_count": solution.backup_count,
            "horizon": solution.model.horizon,
            "root_ccs": input_data.front.points,
            "hypervolume": input_data.front.hypervolume,
            "reference_point": input_data.front.reference_point,
            "policy": input_data.policy,
        }
        if input_data.include_tables:
            document["value_sets"] = [
                {"s": s, "t": t, "points": points.to_list()}
                for (s, t), points in sorted(solution.value_sets.items())
            ]
            if solution.q_sets is not None:
                document["q_sets"] = [
                    {"s": s, "a": a, "t": t, "points": points.to_list()}
                    for (s, a, t), points in sorted(solution.q_sets.items())
                ]
        return TextOutput(
            content=self.dumps(self.remove_null_fields(document)),
            media_type="application/json",
        )


__all__ = ["SolutionJSONFormatter"]
