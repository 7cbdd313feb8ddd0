"""
测试工具模块

包含测试运行器和其他测试辅助工具
"""
