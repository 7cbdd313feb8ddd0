"""
配置验证异常定义
"""

from typing import List, Optional

from drama.base.error_exceptions import ConfigurationError


class ConfigValidationError(ConfigurationError):
    """配置验证错误"""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        super().__init__(
            message, {"errors": list(errors or [])}, "CONFIG_VALIDATION_ERROR"
        )
        self.errors = list(errors or [])
