"""
Shared 모듈
도메인 간 공유되는 베이스 클래스, 타입, 예외 등
"""
