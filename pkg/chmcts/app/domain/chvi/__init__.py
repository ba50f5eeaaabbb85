"""
CHVI Domain

유한 지평 Convex Hull Value Iteration: 정답 CCS, 정책 추출, 백업 수 집계.
"""
