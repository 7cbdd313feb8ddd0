"""
基线算法：LOF 与 iForest
"""
