"""
통합 테스트 패키지

여러 컴포넌트가 함께 동작하는지 검증합니다.
"""
