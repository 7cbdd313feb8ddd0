"""
错误处理相关枚举定义
"""

from enum import Enum


class ErrorSeverity(Enum):
    """错误严重级别"""

    LOW = "low"  # 轻微错误，记录即可
    MEDIUM = "medium"  # 单个网格单元失败，整体继续
    HIGH = "high"  # 当前命令无法完成
    CRITICAL = "critical"  # 程序缺陷，需要修复


class RecoveryStrategy(Enum):
    """恢复策略"""

    NONE = "none"  # 无恢复策略
    SKIP_CELL = "skip_cell"  # 跳过该网格单元，分数记为 NaN
    ABORT = "abort"  # 终止当前命令
