"""
DRAMA 流水线、超参网格与已见异常调参
"""
