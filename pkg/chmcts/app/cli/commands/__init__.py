"""
하위 명령 모듈

각 모듈은 register(subparsers)를 제공합니다.
"""
