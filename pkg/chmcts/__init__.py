"""
CHMCTS Planner
다목적 유한 지평 MOMDP를 위한 Convex Hull Monte-Carlo Tree-Search
"""

__version__ = "0.1.0"
