"""
隐空间 Ward 凝聚聚类

合并树只建一次，可在任意簇数处切割；同一隐空间的多个 n_s 共用一棵树。
簇 id 为其最小成员样本下标；等距时合并 (min id, max id) 字典序最小的一对。
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from drama.service.data.data_model import LatentMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClusterAssignment:
    """簇标签，取值 0..k−1，按最小成员下标升序编号"""

    labels: np.ndarray
    n_s: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)


@dataclass(frozen=True)
class MergeTree:
    """
    完整合并历史

    merges[t] = (a, b)，a < b，表示第 t 步把 id 为 b 的簇并入 id 为 a 的簇；
    heights[t] 为该步的 Ward 合并代价。
    """

    n_samples: int
    merges: np.ndarray
    heights: np.ndarray

    def cut(self, n_clusters: int) -> np.ndarray:
        """切割为 n_clusters 个簇（不超过样本数），返回重新编号的标签"""
        n_clusters = max(1, min(int(n_clusters), self.n_samples))
        parent = np.arange(self.n_samples)
        for a, b in self.merges[: self.n_samples - n_clusters]:
            parent[b] = a

        roots = parent.copy()
        # 父节点下标总是更小，按下标顺序即可一次压缩到根
        for i in range(self.n_samples):
            roots[i] = roots[parent[i]] if parent[i] != i else i
        _, labels = np.unique(roots, return_inverse=True)
        return labels.astype(np.int64)

    def assignment(self, n_s: int) -> ClusterAssignment:
        if n_s < 0:
            raise ValueError(f"n_s 必须 >= 0: {n_s}")
        return ClusterAssignment(self.cut(2**n_s), n_s)


def _row_minimum(distances: np.ndarray, row: int):
    tail = distances[row, row + 1 :]
    if tail.size == 0:
        return np.inf, -1
    offset = int(np.argmin(tail))
    return tail[offset], row + 1 + offset


def build_merge_tree(latent: LatentMatrix) -> MergeTree:
    """Lance–Williams 更新的 Ward 聚类（平方欧氏距离）"""
    points = latent.values
    n = points.shape[0]
    if n == 1:
        return MergeTree(1, np.empty((0, 2), dtype=np.int64), np.empty(0))

    distances = cdist(points, points, "sqeuclidean")
    np.fill_diagonal(distances, np.inf)
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    index = np.arange(n)

    # 每行只看上三角：row_min[r] = min_{c > r} D[r, c]
    row_min = np.full(n, np.inf)
    row_arg = np.full(n, -1, dtype=np.int64)
    for r in range(n):
        row_min[r], row_arg[r] = _row_minimum(distances, r)

    merges = np.empty((n - 1, 2), dtype=np.int64)
    heights = np.empty(n - 1)
    for step in range(n - 1):
        a = int(np.argmin(row_min))
        b = int(row_arg[a])
        height = distances[a, b]
        merges[step] = (a, b)
        heights[step] = height

        others = active.copy()
        others[[a, b]] = False
        n_a, n_b, n_l = sizes[a], sizes[b], sizes[others]
        updated = (
            (n_a + n_l) * distances[a, others]
            + (n_b + n_l) * distances[b, others]
            - n_l * height
        ) / (n_a + n_b + n_l)
        distances[a, others] = updated
        distances[others, a] = updated
        distances[b, :] = np.inf
        distances[:, b] = np.inf
        sizes[a] = n_a + n_b
        active[b] = False
        row_min[b], row_arg[b] = np.inf, -1

        # 最近邻指向 a 或 b 的行需要重算
        stale = active & ((row_arg == a) | (row_arg == b))
        stale[a] = True
        for r in np.flatnonzero(stale):
            row_min[r], row_arg[r] = _row_minimum(distances, r)

        # 其余 r < a 的行只需与新的 D[r, a] 比较
        rows = active & (index < a) & ~stale
        candidate = distances[rows, a]
        better = (candidate < row_min[rows]) | (
            (candidate == row_min[rows]) & (a < row_arg[rows])
        )
        chosen = np.flatnonzero(rows)[better]
        row_min[chosen] = candidate[better]
        row_arg[chosen] = a

    logger.debug(f"Ward 合并树构建完成: n={n}")
    return MergeTree(n, merges, heights)


def agglomerate(latent: LatentMatrix, n_s: int) -> ClusterAssignment:
    """在 min(2^n_s, n_d) 个簇处切割 Ward 合并树"""
    return build_merge_tree(latent).assignment(n_s)
