"""
GDST Domain

Generalised Deep Sea Treasure 인스턴스 생성, 보상 정규화, 최단 경로 전선 오라클.
"""
