"""
性能测试模块

包含系统性能基准测试和性能监控工具
"""
