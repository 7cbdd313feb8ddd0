"""
错误分类管理
"""

from typing import Optional, Type

from drama.base.error_enums import ErrorSeverity, RecoveryStrategy
from drama.base.error_exceptions import (
    ConfigurationError,
    DataError,
    DramaError,
    NumericalError,
)

# CLI 退出码
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class ErrorCategory:
    """错误分类管理"""

    # 默认错误严重级别映射（按 MRO 查找，子类继承父类配置）
    DEFAULT_SEVERITY_MAPPING = {
        ConfigurationError: ErrorSeverity.HIGH,
        DataError: ErrorSeverity.HIGH,
        NumericalError: ErrorSeverity.MEDIUM,
        DramaError: ErrorSeverity.HIGH,
    }

    # 默认错误恢复策略映射
    DEFAULT_RECOVERY_MAPPING = {
        ConfigurationError: RecoveryStrategy.ABORT,
        DataError: RecoveryStrategy.ABORT,
        NumericalError: RecoveryStrategy.SKIP_CELL,
    }

    DEFAULT_EXIT_CODE_MAPPING = {
        ConfigurationError: EXIT_USAGE,
        DataError: EXIT_DATA,
        NumericalError: EXIT_NUMERICAL,
    }

    SEVERITY_MAPPING = DEFAULT_SEVERITY_MAPPING.copy()
    RECOVERY_MAPPING = DEFAULT_RECOVERY_MAPPING.copy()
    EXIT_CODE_MAPPING = DEFAULT_EXIT_CODE_MAPPING.copy()

    @staticmethod
    def _lookup(mapping: dict, error: Exception, default):
        for klass in type(error).__mro__:
            if klass in mapping:
                return mapping[klass]
        return default

    @classmethod
    def get_severity(cls, error: Exception) -> ErrorSeverity:
        """获取错误严重级别，未登记的异常视为程序缺陷"""
        return cls._lookup(cls.SEVERITY_MAPPING, error, ErrorSeverity.CRITICAL)

    @classmethod
    def get_recovery_strategy(cls, error: Exception) -> RecoveryStrategy:
        """获取错误恢复策略"""
        return cls._lookup(cls.RECOVERY_MAPPING, error, RecoveryStrategy.NONE)

    @classmethod
    def get_exit_code(cls, error: Exception) -> int:
        """获取 CLI 退出码；未知异常按数值失败处理"""
        return cls._lookup(cls.EXIT_CODE_MAPPING, error, EXIT_NUMERICAL)

    @classmethod
    def should_skip_cell(cls, error: Exception) -> bool:
        """网格单元失败后是否可以跳过继续"""
        return cls.get_recovery_strategy(error) == RecoveryStrategy.SKIP_CELL

    @classmethod
    def register_error(
        cls,
        error_type: Type[Exception],
        severity: Optional[ErrorSeverity] = None,
        recovery_strategy: Optional[RecoveryStrategy] = None,
        exit_code: Optional[int] = None,
    ) -> None:
        """动态注册新的错误类型配置"""
        if severity:
            cls.SEVERITY_MAPPING[error_type] = severity
        if recovery_strategy:
            cls.RECOVERY_MAPPING[error_type] = recovery_strategy
        if exit_code is not None:
            cls.EXIT_CODE_MAPPING[error_type] = exit_code

    @classmethod
    def reset(cls) -> None:
        """恢复到默认映射（主要用于测试）"""
        cls.SEVERITY_MAPPING = cls.DEFAULT_SEVERITY_MAPPING.copy()
        cls.RECOVERY_MAPPING = cls.DEFAULT_RECOVERY_MAPPING.copy()
        cls.EXIT_CODE_MAPPING = cls.DEFAULT_EXIT_CODE_MAPPING.copy()
