"""
错误收集器
"""

import threading
from datetime import datetime
from typing import Any, Dict, List

from drama.base.error_exceptions import DramaError


class ErrorCollector:
    """错误收集器，用于统计网格运行中的失败单元"""

    def __init__(self, max_records: int = 100):
        self.max_records = max_records
        self.errors: List[Dict[str, Any]] = []
        self.error_counts: Dict[str, int] = {}
        self._lock = threading.Lock()

    def record_error(self, error: Exception, context: str = ""):
        """记录错误"""
        error_info = {
            "timestamp": datetime.now().isoformat(),
            "type": type(error).__name__,
            "message": str(error),
            "context": context,
        }

        if isinstance(error, DramaError):
            error_info.update(
                {"error_code": error.error_code, "details": error.details}
            )

        with self._lock:
            self.errors.append(error_info)
            error_type = error_info["type"]
            self.error_counts[error_type] = self.error_counts.get(error_type, 0) + 1
            # 只保留最近的记录
            if len(self.errors) > self.max_records:
                self.errors = self.errors[-self.max_records :]

    def get_error_summary(self) -> Dict[str, Any]:
        """获取错误统计摘要"""
        with self._lock:
            return {
                "total_errors": sum(self.error_counts.values()),
                "error_counts": self.error_counts.copy(),
                "recent_errors": self.errors[-10:] if self.errors else [],
            }

    def clear_errors(self):
        """清除错误记录"""
        with self._lock:
            self.errors.clear()
            self.error_counts.clear()


# 全局错误收集器实例
error_collector = ErrorCollector()
