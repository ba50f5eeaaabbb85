"""
Selection Domain

결정 노드의 selectAction 전략: Contextual Zooming for Trees(CZT)와
Hypervolume-UCB, Chebychev-UCB, ParetoUCB1 기준선.
"""
