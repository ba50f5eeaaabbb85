"""
단위 테스트 패키지

개별 클래스/함수의 동작을 검증합니다.
"""
