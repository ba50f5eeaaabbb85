"""
CLI 레이어

명령 → Service 실행 → stdout 요약 JSON / 종료 코드
"""
