"""
DRAMA 异常定义

四个大类对应 CLI 退出码：ConfigurationError → 1，DataError → 2，NumericalError → 3。
"""

from datetime import datetime
from typing import Any, Dict, Optional


class DramaError(Exception):
    """DRAMA 基础异常"""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or "UNKNOWN_ERROR"
        self.details = details or {}
        self.timestamp = datetime.now()


# =============================================================================
# 用法 / 配置错误
# =============================================================================


class ConfigurationError(DramaError):
    """配置或用法错误"""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "CONFIG_ERROR",
    ):
        super().__init__(message, error_code, details)


class UsageError(ConfigurationError):
    """命令行用法错误"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details, "USAGE_ERROR")


class LatentDimTooLargeError(ConfigurationError):
    """隐空间维度不小于特征数"""

    def __init__(self, latent_dim: int, n_features: int, limit: int):
        super().__init__(
            f"隐空间维度 {latent_dim} 超出上限 {limit}（特征数 {n_features}）",
            {"latent_dim": latent_dim, "n_features": n_features, "limit": limit},
            "LATENT_DIM_TOO_LARGE",
        )


class KTooLargeError(ConfigurationError):
    """LOF 近邻数不小于样本数"""

    def __init__(self, k: int, n_samples: int):
        super().__init__(
            f"LOF 近邻数 k={k} 必须小于样本数 {n_samples}",
            {"k": k, "n_samples": n_samples},
            "K_TOO_LARGE",
        )


# =============================================================================
# 数据错误
# =============================================================================


class DataError(DramaError):
    """输入数据错误"""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "DATA_ERROR",
    ):
        super().__init__(message, error_code, details)


class NonFiniteEntryError(DataError):
    """矩阵含 NaN/Inf"""

    def __init__(self, row: int, col: int):
        super().__init__(
            f"矩阵第 {row} 行第 {col} 列不是有限值",
            {"row": row, "col": col},
            "NON_FINITE_ENTRY",
        )
        self.row = row
        self.col = col


class EmptyMatrixError(DataError):
    """空矩阵"""

    def __init__(self, shape: tuple = ()):
        super().__init__(
            f"矩阵为空: shape={shape}", {"shape": list(shape)}, "EMPTY_MATRIX"
        )


class ShapeMismatchError(DataError):
    """矩阵形状与模型不符"""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(
            message, {"expected": expected, "actual": actual}, "SHAPE_MISMATCH"
        )


class LengthMismatchError(DataError):
    """向量长度不一致"""

    def __init__(self, left: int, right: int):
        super().__init__(
            f"向量长度不一致: {left} != {right}",
            {"left": left, "right": right},
            "LENGTH_MISMATCH",
        )


class ParseError(DataError):
    """CSV 解析失败"""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(
            f"解析失败（第 {line} 行）: {message}" if line else f"解析失败: {message}",
            {"line": line},
            "PARSE_ERROR",
        )
        self.line = line


class NonNumericFeatureError(DataError):
    """特征列含非数值内容"""

    def __init__(self, column: str):
        super().__init__(
            f"特征列 {column!r} 含非数值内容", {"column": column}, "NON_NUMERIC_FEATURE"
        )
        self.column = column


class BadLabelValueError(DataError):
    """label 列取值不是 0/1"""

    def __init__(self, value: Any, row: Optional[int] = None):
        super().__init__(
            f"label 取值无效: {value!r}（只允许 0 或 1）",
            {"value": str(value), "row": row},
            "BAD_LABEL_VALUE",
        )


class DegenerateLabelsError(DataError):
    """标签缺少 inlier 或 outlier"""

    def __init__(self, n_inliers: int, n_outliers: int):
        super().__init__(
            f"标签退化: inlier={n_inliers}, outlier={n_outliers}",
            {"n_inliers": n_inliers, "n_outliers": n_outliers},
            "DEGENERATE_LABELS",
        )


class NotEnoughOutliersError(DataError):
    """已见异常数超过数据集中的离群点数"""

    def __init__(self, requested: int, available: int):
        super().__init__(
            f"请求 {requested} 个已见异常，但数据集只有 {available} 个离群点",
            {"requested": requested, "available": available},
            "NOT_ENOUGH_OUTLIERS",
        )


class DramaIOError(DataError):
    """文件读写失败"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, {"path": path}, "IO_ERROR")


# =============================================================================
# 数值错误
# =============================================================================


class NumericalError(DramaError):
    """数值计算失败"""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "NUMERICAL_ERROR",
    ):
        super().__init__(message, error_code, details)


class FitDivergedError(NumericalError):
    """训练损失出现非有限值"""

    def __init__(self, kind: str, iteration: int):
        super().__init__(
            f"{kind} 拟合在第 {iteration} 次迭代发散",
            {"kind": kind, "iteration": iteration},
            "FIT_DIVERGED",
        )


class NegativeQuadraticFormError(NumericalError):
    """Mahalanobis 二次型为负，C⁻¹ 不可用"""

    def __init__(self, value: float):
        super().__init__(
            f"Mahalanobis 二次型为负: {value}", {"value": value}, "NEGATIVE_QUADRATIC"
        )


class ZeroVarianceVectorError(NumericalError):
    """相关距离的输入向量中心化后全为零"""

    def __init__(self):
        super().__init__("相关距离输入为常数向量", {}, "ZERO_VARIANCE_VECTOR")


class NonPositiveScaleError(NumericalError):
    """加权距离的尺度向量含非正值"""

    def __init__(self, index: int, value: float):
        super().__init__(
            f"尺度向量第 {index} 项非正: {value}",
            {"index": index, "value": value},
            "NON_POSITIVE_SCALE",
        )
