"""
플래너 애플리케이션 패키지
core / shared / domain / cli 계층으로 구성됩니다.
"""
