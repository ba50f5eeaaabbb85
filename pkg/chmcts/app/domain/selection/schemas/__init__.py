"""
Selection Domain Schemas
"""

from chmcts.app.shared.types import FormatterInput
from chmcts.app.domain.selection.models import BallSet


class BallDumpInput(FormatterInput):
    """CZT 디버그 덤프 대상 (보통 루트 노드의 BallSet)."""

    ball_set: BallSet
    state: int
    depth: int = 0
