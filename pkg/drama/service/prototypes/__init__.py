"""
隐空间聚类与原型提取
"""
