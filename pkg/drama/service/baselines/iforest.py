"""
孤立森林（iForest）

行置换等变：先按行内容字典序得到规范顺序，再在规范顺序上做带种子的无放回子采样，
因此树的构造与输入行顺序无关。
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.special import digamma

from drama.service.baselines.baseline_configs import IforestConfig
from drama.service.data.data_model import DataMatrix

logger = logging.getLogger(__name__)


def average_path_length(n) -> np.ndarray:
    """
    c(n) = 2H(n−1) − 2(n−1)/n，H 为调和数（digamma 精确计算）；n <= 1 时为 0
    """
    n = np.asarray(n, dtype=np.float64)
    safe = np.maximum(n, 2.0)
    harmonic = digamma(safe) + np.euler_gamma
    value = 2.0 * harmonic - 2.0 * (safe - 1.0) / safe
    return np.where(n > 1.0, value, 0.0)


def height_limit(subsample: int) -> int:
    return int(np.ceil(np.log2(subsample))) if subsample > 1 else 0


@dataclass(frozen=True)
class IsolationTree:
    """数组形式的孤立树，feature 为 -1 的节点是叶子"""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    size: np.ndarray
    depth: np.ndarray

    @classmethod
    def grow(
        cls, sample: np.ndarray, limit: int, rng: np.random.Generator
    ) -> "IsolationTree":
        feature: List[int] = []
        threshold: List[float] = []
        left: List[int] = []
        right: List[int] = []
        size: List[int] = []
        depth: List[int] = []

        def add(level: int, count: int) -> int:
            feature.append(-1)
            threshold.append(np.nan)
            left.append(-1)
            right.append(-1)
            size.append(count)
            depth.append(level)
            return len(feature) - 1

        root = add(0, sample.shape[0])
        stack = [(root, np.arange(sample.shape[0]))]
        while stack:
            node, rows = stack.pop()
            level = depth[node]
            if rows.size <= 1 or level >= limit:
                continue
            part = sample[rows]
            low, high = part.min(axis=0), part.max(axis=0)
            candidates = np.flatnonzero(high > low)
            if candidates.size == 0:
                continue

            q = int(candidates[rng.integers(candidates.size)])
            p = float(rng.uniform(low[q], high[q]))
            mask = part[:, q] < p
            left_id = add(level + 1, int(mask.sum()))
            right_id = add(level + 1, int((~mask).sum()))
            feature[node], threshold[node] = q, p
            left[node], right[node] = left_id, right_id
            stack.append((right_id, rows[~mask]))
            stack.append((left_id, rows[mask]))

        return cls(
            feature=np.asarray(feature, dtype=np.int64),
            threshold=np.asarray(threshold, dtype=np.float64),
            left=np.asarray(left, dtype=np.int64),
            right=np.asarray(right, dtype=np.int64),
            size=np.asarray(size, dtype=np.int64),
            depth=np.asarray(depth, dtype=np.int64),
        )

    def leaves(self, points: np.ndarray) -> np.ndarray:
        """每个点落入的叶子节点编号"""
        node = np.zeros(points.shape[0], dtype=np.int64)
        rows = np.arange(points.shape[0])
        active = self.feature[node] >= 0
        while active.any():
            current = node[active]
            column = points[rows[active], self.feature[current]]
            go_left = column < self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])
            active = self.feature[node] >= 0
        return node

    def depths(self, points: np.ndarray) -> np.ndarray:
        """路径深度，不含 c(size) 修正"""
        return self.depth[self.leaves(points)]

    def path_lengths(self, points: np.ndarray) -> np.ndarray:
        leaf = self.leaves(points)
        return self.depth[leaf] + average_path_length(self.size[leaf])


def canonical_order(values: np.ndarray) -> np.ndarray:
    """按行内容字典序（第 0 列为主键）排列的行下标"""
    return np.lexsort(values.T[::-1])


def build_forest(data: DataMatrix, config: IforestConfig) -> List[IsolationTree]:
    values = data.values
    n = data.n_d
    psi = config.subsample
    if psi > n:
        logger.warning(f"iForest 子样本大小 {psi} 超过样本数 {n}，截断为 {n}")
        psi = n

    canonical = values[canonical_order(values)]
    limit = height_limit(psi)
    rng = np.random.default_rng(config.seed)
    forest = []
    for _ in range(config.n_trees):
        picks = rng.choice(n, size=psi, replace=False)
        forest.append(IsolationTree.grow(canonical[picks], limit, rng))
    return forest


def iforest_scores(data: DataMatrix, config: IforestConfig) -> np.ndarray:
    """s = 2^{−E[h]/c(ψ)}，取值 (0, 1)，越大越异常"""
    psi = min(config.subsample, data.n_d)
    forest = build_forest(data, config)
    normalizer = float(average_path_length(psi))
    if normalizer == 0.0:
        logger.warning("iForest 子样本不足 2 个，所有分数记为 0.5")
        return np.full(data.n_d, 0.5)

    mean_path = np.mean([tree.path_lengths(data.values) for tree in forest], axis=0)
    return np.power(2.0, -mean_path / normalizer)
