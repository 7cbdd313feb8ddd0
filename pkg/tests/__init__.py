"""
JJZ-Alert 测试包

提供单元测试和集成测试支持
"""
