"""
错误处理装饰器
"""

import logging
from functools import wraps
from typing import Any, Callable, Optional, Type, Union

from drama.base.error_category import ErrorCategory
from drama.base.error_collector import error_collector
from drama.base.error_enums import ErrorSeverity


def _resolve_log_level(log_level: str, severity: ErrorSeverity) -> str:
    if log_level != "auto":
        return log_level
    if severity == ErrorSeverity.CRITICAL:
        return "critical"
    if severity == ErrorSeverity.HIGH:
        return "error"
    if severity == ErrorSeverity.MEDIUM:
        return "warning"
    return "info"


def with_error_handling(
    exceptions: Union[Type[Exception], tuple] = Exception,
    default_return: Any = None,
    log_level: str = "auto",  # auto表示根据错误级别自动确定
    raise_on_error: bool = False,
    on_error: Optional[Callable[[Exception, str], Any]] = None,
):
    """
    错误处理装饰器，按严重级别记录日志并写入错误收集器

    Args:
        exceptions: 需要捕获的异常类型
        default_return: 异常时的默认返回值
        log_level: 日志级别，"auto"表示根据错误严重性自动确定
        raise_on_error: 是否重新抛出异常
        on_error: 发生错误后的钩子函数，签名为 (error, context)
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except exceptions as e:
                logger = logging.getLogger(func.__module__)
                context = f"{func.__module__}.{func.__name__}"
                severity = ErrorCategory.get_severity(e)
                actual_log_level = _resolve_log_level(log_level, severity)

                getattr(logger, actual_log_level)(f"{context} 执行失败: {e}")
                error_collector.record_error(e, context)

                if on_error:
                    try:
                        on_error(e, context)
                    except Exception as hook_error:
                        logger.warning(f"执行错误钩子失败: {hook_error}")

                if raise_on_error:
                    raise
                return default_return

        return wrapper

    return decorator
