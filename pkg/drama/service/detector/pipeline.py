"""
DRAMA 四步流水线

1. 在 train 上拟合降维并编码；
2. 隐空间 Ward 聚类，切割为 min(2^n_s, n_d) 个簇；
3. 取簇均值为原型，decode_flag 时解码回原始空间；
4. score_i = min_j d(x_i, c_j)，按分数降序排列。
"""

import logging
import threading
import time
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from drama.base.error_exceptions import NumericalError, ShapeMismatchError
from drama.service.baselines.baseline_configs import IforestConfig, LofConfig
from drama.service.baselines.iforest import iforest_scores
from drama.service.baselines.lof import lof_scores
from drama.service.data.data_model import DataMatrix, LatentMatrix
from drama.service.detector.run_config import Candidate, RunConfig
from drama.service.drt.drt_model import DrtModel
from drama.service.drt.drt_service import encode, fit
from drama.service.metrics.distances import distance_matrix
from drama.service.prototypes.clustering import MergeTree, build_merge_tree
from drama.service.prototypes.prototype_set import SpaceTag, extract_prototypes
from drama.service.scoring.scoring import ranking_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnomalyRanking:
    """逐样本异常分数及其降序排列（同分按下标升序）"""

    scores: np.ndarray
    order: np.ndarray
    config: Candidate

    def __post_init__(self):
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        if not np.all(np.isfinite(scores)):
            raise NumericalError(
                f"异常分数含非有限值: {self.config.config_id}",
                {"config_id": self.config.config_id},
            )
        order = np.array(self.order, dtype=np.int64, copy=True)
        scores.setflags(write=False)
        order.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "order", order)

    @classmethod
    def from_scores(cls, scores: np.ndarray, config: Candidate) -> "AnomalyRanking":
        return cls(scores=scores, order=ranking_order(scores), config=config)

    def ranks(self) -> np.ndarray:
        """每个样本的名次，1 为最异常"""
        ranks = np.empty_like(self.order)
        ranks[self.order] = np.arange(1, self.order.shape[0] + 1)
        return ranks


@dataclass(frozen=True)
class Reduction:
    """同一降维拟合的复用结果"""

    model: DrtModel
    latent: LatentMatrix
    tree: MergeTree


class ReductionCache:
    """
    按 RunConfig.reduction_key 缓存降维拟合、训练集编码与合并树

    只绑定一个训练矩阵；拟合失败的异常同样缓存，后续同 key 单元直接重新抛出。
    """

    def __init__(self, train: DataMatrix):
        self.train = train
        self._items: Dict[Tuple, object] = {}
        self._key_locks: Dict[Tuple, threading.Lock] = {}
        self._lock = threading.Lock()

    def get(self, config: RunConfig) -> Reduction:
        key = config.reduction_key
        with self._lock:
            key_lock = self._key_locks.setdefault(key, threading.Lock())
        with key_lock:
            if key not in self._items:
                try:
                    self._items[key] = reduce_train(self.train, config)
                except NumericalError as e:
                    self._items[key] = e
            item = self._items[key]
        if isinstance(item, Exception):
            raise item
        return item

    def __len__(self) -> int:
        return len(self._items)


def reduce_train(train: DataMatrix, config: RunConfig) -> Reduction:
    """拟合、编码训练集并建合并树"""
    model = fit(
        config.drt, train, config.latent_dim, config.seed, settings=config.settings
    )
    latent = encode(model, train)
    return Reduction(model=model, latent=latent, tree=build_merge_tree(latent))


def run_pipeline(
    train: DataMatrix,
    test: Optional[DataMatrix],
    config: RunConfig,
    cache: Optional[ReductionCache] = None,
) -> AnomalyRanking:
    """
    在 train 上构建原型并为 test 的每一行打分；test 为 None 时为转导模式（test = train）

    Raises:
        ShapeMismatchError: train 与 test 特征数不同
    """
    start_time = time.time()
    transductive = test is None or test is train
    test = train if test is None else test
    if test.n_f != train.n_f:
        raise ShapeMismatchError(
            "训练集与测试集特征数不一致", expected=train.n_f, actual=test.n_f
        )

    if cache is not None and cache.train is train:
        reduction = cache.get(config)
    else:
        reduction = reduce_train(train, config)

    assignment = reduction.tree.assignment(config.n_s)
    prototypes = extract_prototypes(
        train, reduction.latent, assignment, reduction.model, config.decode_flag
    )

    if prototypes.space_tag is SpaceTag.ORIGINAL:
        points = test.values
    elif transductive:
        points = reduction.latent.values
    else:
        points = encode(reduction.model, test).values

    contexts = prototypes.metric_contexts(config.metric)
    distances = distance_matrix(
        config.metric, points, prototypes.prototypes, contexts
    )
    ranking = AnomalyRanking.from_scores(distances.min(axis=1), config)

    logger.debug(
        f"流水线完成: {config.config_id}, 原型 {prototypes.n_prototypes} 个, "
        f"耗时 {(time.time() - start_time) * 1000:.1f}ms"
    )
    return ranking


def run_candidate(
    data: DataMatrix, candidate: Candidate, cache: Optional[ReductionCache] = None
) -> AnomalyRanking:
    """按算法分派的转导打分：DRAMA 流水线、LOF 或 iForest"""
    if isinstance(candidate, RunConfig):
        return run_pipeline(data, None, candidate, cache)
    if isinstance(candidate, LofConfig):
        return AnomalyRanking.from_scores(lof_scores(data, candidate), candidate)
    if isinstance(candidate, IforestConfig):
        return AnomalyRanking.from_scores(iforest_scores(data, candidate), candidate)
    raise TypeError(f"未知的候选配置类型: {type(candidate).__name__}")
