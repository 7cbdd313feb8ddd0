"""
距离度量公式

逐对函数与批量 `distance_matrix` 共用同一套逐行实现，两者结果逐位一致。
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from drama.base.error_exceptions import (
    LengthMismatchError,
    NegativeQuadraticFormError,
    NonPositiveScaleError,
    NumericalError,
    ShapeMismatchError,
    ZeroVarianceVectorError,
)
from drama.service.metrics.metric_kind import MetricKind

SIGMA_FLOOR = 1e-8
SYMMETRY_TOL = 1e-10
NEGATIVE_QUADRATIC_TOL = 1e-10


@dataclass(frozen=True)
class MetricContext:
    """加权度量的尺度向量与 Mahalanobis 的逆协方差"""

    sigma: Optional[np.ndarray] = None
    inv_covariance: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.sigma is not None:
            sigma = np.asarray(self.sigma, dtype=np.float64)
            _check_sigma(sigma)
            object.__setattr__(self, "sigma", sigma)
        if self.inv_covariance is not None:
            inv = np.asarray(self.inv_covariance, dtype=np.float64)
            if inv.ndim != 2 or inv.shape[0] != inv.shape[1]:
                raise ShapeMismatchError(
                    "逆协方差必须是方阵", expected="p×p", actual=list(inv.shape)
                )
            if np.max(np.abs(inv - inv.T), initial=0.0) > SYMMETRY_TOL:
                raise NumericalError("逆协方差矩阵不对称")
            object.__setattr__(self, "inv_covariance", inv)


def feature_sigma(values: np.ndarray) -> np.ndarray:
    """逐特征总体标准差，下限 1e-8"""
    return np.maximum(np.asarray(values, dtype=np.float64).std(axis=0), SIGMA_FLOOR)


def _check_sigma(sigma: np.ndarray) -> None:
    bad = np.flatnonzero(~(sigma > 0.0))
    if bad.size:
        index = int(bad[0])
        raise NonPositiveScaleError(index, float(sigma[index]))


def _as_pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape[0] != v.shape[0]:
        raise LengthMismatchError(u.shape[0], v.shape[0])
    return u, v


# =============================================================================
# 逐行实现：points 为 n × p，center 为长度 p 的向量
# =============================================================================


def _minkowski_rows(diff: np.ndarray, p: int) -> np.ndarray:
    magnitude = np.abs(diff)
    if p == 1:
        return magnitude.sum(axis=1)
    if p == 2:
        return np.sqrt((magnitude * magnitude).sum(axis=1))
    if p == 4:
        squared = magnitude * magnitude
        return np.sqrt(np.sqrt((squared * squared).sum(axis=1)))
    raise ValueError(f"不支持的范数阶: p={p}")


def _bray_curtis_rows(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """逐行 Bray-Curtis；x/0（x > 0）抛出 NumericalError，0/0 记为 0"""
    numerator = np.abs(points - center).sum(axis=1)
    denominator = np.abs(points + center).sum(axis=1)
    zero = denominator == 0.0
    if np.any(zero & (numerator > 0.0)):
        raise NumericalError("Bray-Curtis 分母为零而分子非零")
    return np.divide(
        numerator, denominator, out=np.zeros_like(numerator), where=~zero
    )


def _canberra_rows(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    numerator = np.abs(points - center)
    denominator = np.abs(points) + np.abs(center)
    ratio = np.divide(
        numerator,
        denominator,
        out=np.zeros_like(numerator),
        where=denominator > 0.0,
    )
    return ratio.sum(axis=1)


def _correlation_rows(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    if np.ptp(center) == 0.0 or np.any(np.ptp(points, axis=1) == 0.0):
        raise ZeroVarianceVectorError()
    centered_points = points - points.mean(axis=1, keepdims=True)
    centered_center = center - center.mean()
    numerator = centered_points @ centered_center
    denominator = np.sqrt((centered_points * centered_points).sum(axis=1)) * np.sqrt(
        centered_center @ centered_center
    )
    return np.clip(1.0 - numerator / denominator, 0.0, 2.0)


def _mahalanobis_rows(diff: np.ndarray, inv_covariance: np.ndarray) -> np.ndarray:
    if inv_covariance.shape[0] != diff.shape[1]:
        raise LengthMismatchError(diff.shape[1], inv_covariance.shape[0])
    quadratic = np.einsum("ij,jk,ik->i", diff, inv_covariance, diff)
    norms = (diff * diff).sum(axis=1)
    negative = quadratic < -NEGATIVE_QUADRATIC_TOL * (1.0 + norms)
    if np.any(negative):
        raise NegativeQuadraticFormError(float(quadratic[np.argmax(negative)]))
    return np.sqrt(np.maximum(quadratic, 0.0))


def _rows(
    kind: MetricKind,
    points: np.ndarray,
    center: np.ndarray,
    context: Optional[MetricContext],
) -> np.ndarray:
    if kind is MetricKind.L1:
        return _minkowski_rows(points - center, 1)
    if kind is MetricKind.L2:
        return _minkowski_rows(points - center, 2)
    if kind is MetricKind.L4:
        return _minkowski_rows(points - center, 4)
    if kind in (MetricKind.WL2, MetricKind.WL4):
        if context is None or context.sigma is None:
            raise ValueError(f"{kind.value} 需要尺度向量 sigma")
        if context.sigma.shape[0] != points.shape[1]:
            raise LengthMismatchError(points.shape[1], context.sigma.shape[0])
        order = 2 if kind is MetricKind.WL2 else 4
        return _minkowski_rows((points - center) / context.sigma, order)
    if kind is MetricKind.BRAY_CURTIS:
        return _bray_curtis_rows(points, center)
    if kind is MetricKind.CHEBYSHEV:
        return np.abs(points - center).max(axis=1)
    if kind is MetricKind.CANBERRA:
        return _canberra_rows(points, center)
    if kind is MetricKind.CORRELATION:
        return _correlation_rows(points, center)
    if kind is MetricKind.MAHALANOBIS:
        if context is None or context.inv_covariance is None:
            raise ValueError("mahalanobis 需要逆协方差矩阵")
        return _mahalanobis_rows(points - center, context.inv_covariance)
    raise ValueError(f"未知的距离度量: {kind}")


# =============================================================================
# 逐对接口
# =============================================================================


def minkowski(u, v, p: int) -> float:
    """||u − v||_p，p ∈ {1, 2, 4}"""
    u, v = _as_pair(u, v)
    return float(_minkowski_rows((u - v)[None, :], p)[0])


def weighted_minkowski(u, v, p: int, sigma) -> float:
    """||(u − v) / σ||_p，p ∈ {2, 4}"""
    u, v = _as_pair(u, v)
    sigma = np.asarray(sigma, dtype=np.float64).ravel()
    if sigma.shape[0] != u.shape[0]:
        raise LengthMismatchError(u.shape[0], sigma.shape[0])
    _check_sigma(sigma)
    return float(_minkowski_rows(((u - v) / sigma)[None, :], p)[0])


def bray_curtis(u, v) -> float:
    """
    Σ|u − v| / Σ|u + v|

    0/0 记为 0；分母为 0 而分子非 0（如 [1, −1] 与 [−1, 1]）抛出 NumericalError，
    调参时该配置单元按失败记录。
    """
    u, v = _as_pair(u, v)
    return float(_bray_curtis_rows(u[None, :], v)[0])


def chebyshev(u, v) -> float:
    u, v = _as_pair(u, v)
    return float(np.abs(u - v).max())


def canberra(u, v) -> float:
    """Σ |u_i − v_i| / (|u_i| + |v_i|)，逐坐标 0/0 记为 0"""
    u, v = _as_pair(u, v)
    return float(_canberra_rows(u[None, :], v)[0])


def correlation_distance(u, v) -> float:
    """1 − 中心化向量的余弦相似度，取值 [0, 2]"""
    u, v = _as_pair(u, v)
    return float(_correlation_rows(u[None, :], v)[0])


def mahalanobis(u, v, inv_covariance) -> float:
    """√((u − v) C⁻¹ (u − v)ᵀ)"""
    u, v = _as_pair(u, v)
    inv = np.asarray(inv_covariance, dtype=np.float64)
    return float(_mahalanobis_rows((u - v)[None, :], inv)[0])


def distance(
    kind: MetricKind, u, v, context: Optional[MetricContext] = None
) -> float:
    """按度量种类分派的逐对距离"""
    u, v = _as_pair(u, v)
    return float(_rows(kind, u[None, :], v, context)[0])


def distance_matrix(
    kind: MetricKind,
    points: np.ndarray,
    prototypes: np.ndarray,
    contexts: Optional[Sequence[Optional[MetricContext]]] = None,
) -> np.ndarray:
    """
    批量距离：返回 n × k 矩阵，第 (i, j) 项为 d(points_i, prototypes_j)

    Args:
        contexts: 与原型一一对应的上下文；为 None 时不带上下文
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    prototypes = np.atleast_2d(np.asarray(prototypes, dtype=np.float64))
    if points.shape[1] != prototypes.shape[1]:
        raise LengthMismatchError(points.shape[1], prototypes.shape[1])
    if contexts is not None and len(contexts) != prototypes.shape[0]:
        raise LengthMismatchError(len(contexts), prototypes.shape[0])

    result = np.empty((points.shape[0], prototypes.shape[0]), dtype=np.float64)
    for j, center in enumerate(prototypes):
        context = None if contexts is None else contexts[j]
        result[:, j] = _rows(kind, points, center, context)
    return result
