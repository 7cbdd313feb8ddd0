"""
排序评估
"""
