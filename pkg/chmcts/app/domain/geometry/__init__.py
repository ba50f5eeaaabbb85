"""
Geometry Domain

점 집합 대수: 지배 관계, Pareto/CCS 가지치기, 집합 연산, 하이퍼볼륨, 스칼라화.
"""

from chmcts.app.domain.geometry.models import (
    DominanceRelation,
    PointSet,
    PruneMode,
    WeightVector,
)
from chmcts.app.domain.geometry.calculators import Scalarization, SimplexSampler

__all__ = [
    "DominanceRelation",
    "PointSet",
    "PruneMode",
    "WeightVector",
    "Scalarization",
    "SimplexSampler",
]
