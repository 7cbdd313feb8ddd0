"""
局部离群因子（LOF）

标准化特征上的欧氏距离；k-距离邻域包含与第 k 近邻等距的全部点。
"""

import logging

import numpy as np
from scipy.spatial.distance import cdist

from drama.base.error_exceptions import KTooLargeError
from drama.service.baselines.baseline_configs import LofConfig
from drama.service.data.data_model import DataMatrix, standardize

logger = logging.getLogger(__name__)

LRD_EPS = 1e-10


def lof_scores(data: DataMatrix, config: LofConfig) -> np.ndarray:
    """
    逐点 LOF 值，inlier 约为 1，越大越异常

    Raises:
        KTooLargeError: k >= n_d
    """
    n = data.n_d
    k = config.k
    if k >= n:
        raise KTooLargeError(k, n)

    points = standardize(data)[0].values
    distances = cdist(points, points, "euclidean")
    np.fill_diagonal(distances, np.inf)

    k_distance = np.partition(distances, k - 1, axis=1)[:, k - 1]
    neighbours = distances <= k_distance[:, None]
    sizes = neighbours.sum(axis=1)

    reach = np.where(neighbours, np.maximum(k_distance[None, :], distances), 0.0)
    lrd = 1.0 / (LRD_EPS + reach.sum(axis=1) / sizes)

    neighbour_lrd = np.where(neighbours, lrd[None, :], 0.0).sum(axis=1) / sizes
    scores = neighbour_lrd / lrd
    logger.debug(f"LOF 计算完成: n={n}, k={k}, max={scores.max():.4f}")
    return scores
