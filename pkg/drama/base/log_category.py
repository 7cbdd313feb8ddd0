"""
日志分类枚举定义
"""

from enum import Enum


class LogCategory(Enum):
    """日志分类"""

    SYSTEM = "system"  # 系统级日志
    PIPELINE = "pipeline"  # 检测流水线日志
    PERFORMANCE = "performance"  # 性能相关日志
    EXPERIMENT = "experiment"  # 实验与调参日志
    IO = "io"  # 文件读写日志
    ERROR = "error"  # 错误日志
