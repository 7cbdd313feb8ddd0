"""
原型提取与簇协方差

原型为隐空间簇均值，decode_flag 打开时再解码回原始特征空间。
协方差为总体协方差，按需计算并缓存；正则化规则：

- C + λI，λ = 1e-6 × trace(C) / p，trace 为 0 时 λ = 1e-6；
- 成员数 < p+1 的簇先以权重 clip((p+1−count)/p, 0, 1) 向全局协方差收缩，
  单点簇即完全使用全局协方差。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import List, Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from drama.base.error_exceptions import LengthMismatchError, NumericalError
from drama.service.data.data_model import DataMatrix, LatentMatrix
from drama.service.drt.drt_model import DrtModel
from drama.service.drt.drt_service import decode
from drama.service.metrics.distances import MetricContext, feature_sigma
from drama.service.metrics.metric_kind import MetricKind
from drama.service.prototypes.clustering import ClusterAssignment

logger = logging.getLogger(__name__)

RIDGE_FACTOR = 1e-6


class SpaceTag(Enum):
    """原型所在空间"""

    LATENT = "latent"
    ORIGINAL = "original"


def population_covariance(values: np.ndarray) -> np.ndarray:
    centered = values - values.mean(axis=0)
    covariance = centered.T @ centered / values.shape[0]
    return 0.5 * (covariance + covariance.T)


def _ridge(covariance: np.ndarray) -> np.ndarray:
    p = covariance.shape[0]
    trace = float(np.trace(covariance))
    lam = RIDGE_FACTOR * trace / p if trace > 0.0 else RIDGE_FACTOR
    return covariance + lam * np.eye(p)


def regularized_covariances(
    values: np.ndarray, labels: np.ndarray, n_clusters: int
) -> np.ndarray:
    """返回 k × p × p 的正则化簇协方差"""
    p = values.shape[1]
    global_cov = population_covariance(values)
    result = np.empty((n_clusters, p, p))
    for j in range(n_clusters):
        members = values[labels == j]
        count = members.shape[0]
        weight = float(np.clip((p + 1 - count) / p, 0.0, 1.0))
        if weight >= 1.0:
            blended = global_cov
        else:
            blended = (1.0 - weight) * population_covariance(members)
            if weight > 0.0:
                blended = blended + weight * global_cov
        result[j] = _ridge(blended)
    return result


def inverse_covariance(covariance: np.ndarray) -> np.ndarray:
    """Cholesky 求逆并对称化"""
    try:
        factor = cho_factor(covariance, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise NumericalError(f"簇协方差不可 Cholesky 分解: {e}")
    inverse = cho_solve(factor, np.eye(covariance.shape[0]))
    return 0.5 * (inverse + inverse.T)


@dataclass(frozen=True)
class PrototypeSet:
    """
    原型集合

    prototypes 为 k × p（p = m 或 n_f，取决于 space_tag）；
    covariances / latent_covariances 分别是原始空间与隐空间的正则化簇协方差。
    """

    prototypes: np.ndarray
    space_tag: SpaceTag
    member_counts: np.ndarray
    latent_centers: np.ndarray
    labels: np.ndarray = field(repr=False)
    data_values: np.ndarray = field(repr=False)
    latent_values: np.ndarray = field(repr=False)

    @property
    def n_prototypes(self) -> int:
        return int(self.prototypes.shape[0])

    @cached_property
    def covariances(self) -> np.ndarray:
        return regularized_covariances(
            self.data_values, self.labels, self.n_prototypes
        )

    @cached_property
    def latent_covariances(self) -> np.ndarray:
        return regularized_covariances(
            self.latent_values, self.labels, self.n_prototypes
        )

    def space_covariances(self) -> np.ndarray:
        if self.space_tag is SpaceTag.ORIGINAL:
            return self.covariances
        return self.latent_covariances

    def reference_values(self) -> np.ndarray:
        """原型所在空间中的训练点"""
        if self.space_tag is SpaceTag.ORIGINAL:
            return self.data_values
        return self.latent_values

    def metric_contexts(self, kind: MetricKind) -> Optional[List[MetricContext]]:
        """
        为每个原型构建度量上下文

        sigma 取训练点在原型空间的逐特征总体标准差；Mahalanobis 取各簇正则化协方差的逆。
        """
        if kind.needs_sigma:
            sigma = feature_sigma(self.reference_values())
            return [MetricContext(sigma=sigma)] * self.n_prototypes
        if kind.needs_covariance:
            return [
                MetricContext(inv_covariance=inverse_covariance(c))
                for c in self.space_covariances()
            ]
        return None


def extract_prototypes(
    data: DataMatrix,
    latent: LatentMatrix,
    assignment: ClusterAssignment,
    model: DrtModel,
    decode_flag: bool,
) -> PrototypeSet:
    """隐空间簇均值作为原型，decode_flag 时解码到原始空间"""
    n_d = data.n_d
    if latent.n_d != n_d:
        raise LengthMismatchError(latent.n_d, n_d)
    if assignment.labels.shape[0] != n_d:
        raise LengthMismatchError(assignment.labels.shape[0], n_d)

    k = assignment.n_clusters
    labels = assignment.labels
    counts = np.bincount(labels, minlength=k)
    centers = np.stack([latent.values[labels == j].mean(axis=0) for j in range(k)])

    if decode_flag:
        prototypes = decode(model, LatentMatrix(centers)).values
        tag = SpaceTag.ORIGINAL
    else:
        prototypes = centers
        tag = SpaceTag.LATENT

    return PrototypeSet(
        prototypes=prototypes,
        space_tag=tag,
        member_counts=counts,
        latent_centers=centers,
        labels=labels,
        data_values=data.values,
        latent_values=latent.values,
    )
