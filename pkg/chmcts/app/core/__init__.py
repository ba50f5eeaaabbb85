"""
Core 모듈
설정, 로깅, 실행 컨텍스트, 워커 풀 등 인프라스트럭처
"""
