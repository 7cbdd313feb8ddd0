"""
错误处理模块单元测试
"""

import logging
from datetime import datetime
from unittest.mock import Mock

import pytest

from drama.base.error_handler import (
    BadLabelValueError,
    ConfigurationError,
    DataError,
    DegenerateLabelsError,
    DramaError,
    ErrorCategory,
    ErrorCollector,
    ErrorSeverity,
    FitDivergedError,
    KTooLargeError,
    NonFiniteEntryError,
    NumericalError,
    ParseError,
    RecoveryStrategy,
    UsageError,
    error_collector,
    with_error_handling,
)
from drama.base.error_category import EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE


@pytest.mark.unit
class TestDramaError:
    """测试DramaError基础异常类"""

    def test_drama_error_basic(self):
        """测试基础异常创建"""
        error = DramaError("测试错误")
        assert str(error) == "测试错误"
        assert error.error_code == "UNKNOWN_ERROR"
        assert error.details == {}
        assert isinstance(error.timestamp, datetime)

    def test_drama_error_with_details(self):
        """测试带详细信息的异常"""
        error = DramaError("测试错误", error_code="X", details={"key": "value"})
        assert error.error_code == "X"
        assert error.details == {"key": "value"}


@pytest.mark.unit
class TestSpecificErrors:
    """测试特定错误类型"""

    def test_usage_error_is_configuration_error(self):
        error = UsageError("参数错误")
        assert isinstance(error, ConfigurationError)
        assert error.error_code == "USAGE_ERROR"

    def test_non_finite_entry_details(self):
        error = NonFiniteEntryError(3, 1)
        assert isinstance(error, DataError)
        assert error.details["row"] == 3
        assert error.details["col"] == 1

    def test_parse_error_line(self):
        error = ParseError("坏行", line=7)
        assert error.details["line"] == 7

    def test_k_too_large(self):
        error = KTooLargeError(10, 5)
        assert error.error_code == "K_TOO_LARGE"

    def test_fit_diverged_is_numerical(self):
        assert isinstance(FitDivergedError("ae", 12), NumericalError)


@pytest.mark.unit
class TestErrorCategory:
    """测试错误分类"""

    @pytest.mark.parametrize(
        "error, code",
        [
            (UsageError("x"), EXIT_USAGE),
            (KTooLargeError(5, 3), EXIT_USAGE),
            (BadLabelValueError(2, 0), EXIT_DATA),
            (DegenerateLabelsError(0, 3), EXIT_DATA),
            (FitDivergedError("vae", 1), EXIT_NUMERICAL),
            (RuntimeError("bug"), EXIT_NUMERICAL),
        ],
    )
    def test_exit_codes(self, error, code):
        assert ErrorCategory.get_exit_code(error) == code

    def test_numerical_errors_skip_cell(self):
        assert ErrorCategory.should_skip_cell(FitDivergedError("ae", 3))
        assert not ErrorCategory.should_skip_cell(DegenerateLabelsError(1, 0))

    def test_unknown_error_is_critical(self):
        assert ErrorCategory.get_severity(ValueError("x")) == ErrorSeverity.CRITICAL

    def test_register_and_reset(self):
        class CustomError(DramaError):
            pass

        ErrorCategory.register_error(
            CustomError,
            severity=ErrorSeverity.LOW,
            recovery_strategy=RecoveryStrategy.SKIP_CELL,
            exit_code=EXIT_DATA,
        )
        assert ErrorCategory.get_exit_code(CustomError("x")) == EXIT_DATA
        assert ErrorCategory.should_skip_cell(CustomError("x"))

        ErrorCategory.reset()
        assert not ErrorCategory.should_skip_cell(CustomError("x"))


@pytest.mark.unit
class TestErrorCollector:
    """测试错误收集器"""

    def test_record_and_summary(self):
        collector = ErrorCollector()
        collector.record_error(FitDivergedError("ae", 4), "grid:cell")
        collector.record_error(FitDivergedError("ae", 5), "grid:cell")
        collector.record_error(ValueError("x"))

        summary = collector.get_error_summary()
        assert summary["total_errors"] == 3
        assert summary["error_counts"]["FitDivergedError"] == 2
        assert summary["recent_errors"][0]["error_code"] == "FIT_DIVERGED"

    def test_max_records(self):
        collector = ErrorCollector(max_records=5)
        for i in range(12):
            collector.record_error(ValueError(str(i)))
        assert len(collector.errors) == 5
        assert collector.errors[-1]["message"] == "11"

    def test_clear(self):
        collector = ErrorCollector()
        collector.record_error(ValueError("x"))
        collector.clear_errors()
        assert collector.get_error_summary()["total_errors"] == 0


@pytest.mark.unit
class TestWithErrorHandling:
    """测试错误处理装饰器"""

    def test_returns_default_and_records(self):
        @with_error_handling(exceptions=DataError, default_return="fallback")
        def failing():
            raise DegenerateLabelsError(0, 2)

        assert failing() == "fallback"
        assert error_collector.get_error_summary()["error_counts"] == {
            "DegenerateLabelsError": 1
        }

    def test_reraise(self):
        @with_error_handling(exceptions=NumericalError, raise_on_error=True)
        def failing():
            raise FitDivergedError("nmf", 9)

        with pytest.raises(FitDivergedError):
            failing()

    def test_unmatched_exception_propagates(self):
        @with_error_handling(exceptions=DataError)
        def failing():
            raise UsageError("x")

        with pytest.raises(UsageError):
            failing()

    def test_on_error_hook(self):
        hook = Mock()

        @with_error_handling(exceptions=DataError, on_error=hook)
        def failing():
            raise DegenerateLabelsError(1, 0)

        failing()
        hook.assert_called_once()
        error, context = hook.call_args[0]
        assert isinstance(error, DegenerateLabelsError)
        assert context.endswith("failing")

    def test_auto_log_level(self, caplog):
        caplog.set_level(logging.INFO)

        @with_error_handling(exceptions=NumericalError)
        def failing():
            raise FitDivergedError("ae", 1)

        failing()
        assert caplog.records[-1].levelno == logging.WARNING
