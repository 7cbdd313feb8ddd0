"""
drama 顶级包

降维 + 隐空间聚类原型 + max–min 距离排序的异常检测框架，
统一暴露 base、config、service 等子模块。
"""

__version__ = "0.3.0"

__all__ = [
    "base",
    "config",
    "service",
]
