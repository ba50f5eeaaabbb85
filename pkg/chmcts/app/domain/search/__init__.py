"""
Search Domain

CHMCTS 트리 탐색: 결정/기회 노드, 시행 루프, 집합 백업, 라벨링, 트리 정책 평가.
"""
