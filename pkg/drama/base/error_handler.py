"""
错误处理工具模块

提供统一的异常层级、错误分类与收集
"""

# 导入工具类
from drama.base.error_category import (
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    ErrorCategory,
)
from drama.base.error_collector import ErrorCollector

# 导入全局实例
from drama.base.error_collector import error_collector

# 导入装饰器
from drama.base.error_decorators import with_error_handling

# 导入枚举类
from drama.base.error_enums import ErrorSeverity, RecoveryStrategy

# 导入所有异常类
from drama.base.error_exceptions import (
    BadLabelValueError,
    ConfigurationError,
    DataError,
    DegenerateLabelsError,
    DramaError,
    DramaIOError,
    EmptyMatrixError,
    FitDivergedError,
    KTooLargeError,
    LatentDimTooLargeError,
    LengthMismatchError,
    NegativeQuadraticFormError,
    NonFiniteEntryError,
    NonNumericFeatureError,
    NonPositiveScaleError,
    NotEnoughOutliersError,
    NumericalError,
    ParseError,
    ShapeMismatchError,
    UsageError,
    ZeroVarianceVectorError,
)

__all__ = [
    # 异常类
    "DramaError",
    "ConfigurationError",
    "UsageError",
    "LatentDimTooLargeError",
    "KTooLargeError",
    "DataError",
    "NonFiniteEntryError",
    "EmptyMatrixError",
    "ShapeMismatchError",
    "LengthMismatchError",
    "ParseError",
    "NonNumericFeatureError",
    "BadLabelValueError",
    "DegenerateLabelsError",
    "NotEnoughOutliersError",
    "DramaIOError",
    "NumericalError",
    "FitDivergedError",
    "NegativeQuadraticFormError",
    "ZeroVarianceVectorError",
    "NonPositiveScaleError",
    # 枚举类
    "ErrorSeverity",
    "RecoveryStrategy",
    # 工具类
    "ErrorCategory",
    "ErrorCollector",
    # 装饰器
    "with_error_handling",
    # 退出码
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_DATA",
    "EXIT_NUMERICAL",
    # 全局实例
    "error_collector",
]
