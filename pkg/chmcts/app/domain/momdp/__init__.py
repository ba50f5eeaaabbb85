"""
MOMDP Domain

유한 지평 MOMDP 모델, 정책, 궤적 시뮬레이션, 정확한 정책 평가.
"""
