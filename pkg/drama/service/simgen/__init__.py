"""
模拟挑战数据生成
"""
