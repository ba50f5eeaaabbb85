"""
Evaluation 도메인

후회(LCR, Pareto regret) 측정과 세 가지 실험(regret / offline / scale)을 담당합니다.
"""
