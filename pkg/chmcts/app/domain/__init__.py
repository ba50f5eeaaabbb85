"""
Domain 모듈

각 도메인은 다음 구조를 따릅니다:
    my_domain/
    ├── __init__.py
    ├── models/          # 도메인 엔티티 (dataclass)
    ├── schemas/         # Pydantic 스키마 (파일 형식, 요청/응답)
    ├── providers/       # BaseProvider 구현체 (파일 입출력)
    ├── calculators/     # BaseCalculator 구현체 (알고리즘)
    ├── formatters/      # BaseFormatter 구현체 (JSON/CSV/SVG)
    └── service.py       # BaseService 구현체
"""
