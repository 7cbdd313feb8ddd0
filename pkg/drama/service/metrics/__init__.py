"""
距离度量
"""
