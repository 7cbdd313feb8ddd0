"""
排序评估：AUC 与 RWS

RWS = Σ_{i=1}^{N} w_i I_i / (N(N+1)/2)，w_i = N + 1 − i，N 为离群点数，完美排序得 1。
paper_scale=True 时改用前置因子 1/(N(N+1))，完美排序得 1/2。
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from drama.base.error_exceptions import DegenerateLabelsError, LengthMismatchError
from drama.service.data.data_model import LabelVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoreReport:
    """单次排序的评估结果"""

    auc: float
    rws: float
    n_outliers: int
    dataset: str = ""
    config_id: str = ""
    seed: int = 0


def _flags(labels: LabelVector, n: int) -> np.ndarray:
    if len(labels) != n:
        raise LengthMismatchError(n, len(labels))
    return labels.is_outlier


def _scores(scores: Sequence[float]) -> np.ndarray:
    return np.asarray(scores, dtype=np.float64).ravel()


def auc(scores: Sequence[float], labels: LabelVector) -> float:
    """
    秩统计量形式的 AUC：随机离群点得分高于随机 inlier 的概率，并列计 1/2

    Raises:
        DegenerateLabelsError: 缺少 inlier 或 outlier
    """
    values = _scores(scores)
    flags = _flags(labels, values.shape[0])
    n_out = int(flags.sum())
    n_in = int(flags.shape[0] - n_out)
    if n_out == 0 or n_in == 0:
        raise DegenerateLabelsError(n_in, n_out)

    ranks = rankdata(values, method="average")
    rank_sum = float(ranks[flags].sum())
    return (rank_sum - n_out * (n_out + 1) / 2.0) / (n_out * n_in)


def rws(
    order: Sequence[int], labels: LabelVector, paper_scale: bool = False
) -> float:
    """
    秩加权分数

    Args:
        order: 按异常程度降序排列的样本下标
        paper_scale: True 时返回原始归一化（满分 1/2）
    """
    order = np.asarray(order, dtype=np.int64).ravel()
    flags = _flags(labels, order.shape[0])
    n = int(flags.sum())
    if n == 0:
        raise DegenerateLabelsError(int(flags.shape[0]), 0)

    hits = flags[order[:n]].astype(np.float64)
    weights = np.arange(n, 0, -1, dtype=np.float64)
    total = float(weights @ hits)
    if paper_scale:
        return total / (n * (n + 1))
    return total / (n * (n + 1) / 2.0)


def ranking_order(scores: Sequence[float]) -> np.ndarray:
    """分数降序，同分按下标升序"""
    values = _scores(scores)
    return np.lexsort((np.arange(values.shape[0]), -values))


def roc_curve(
    scores: Sequence[float], labels: LabelVector
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    经验 ROC 曲线

    Returns:
        (fpr, tpr, thresholds)，阈值从 +inf 开始降序；同分样本在同一阈值一起越过
    """
    values = _scores(scores)
    flags = _flags(labels, values.shape[0])
    n_out = int(flags.sum())
    n_in = int(flags.shape[0] - n_out)
    if n_out == 0 or n_in == 0:
        raise DegenerateLabelsError(n_in, n_out)

    order = np.argsort(-values, kind="stable")
    sorted_scores = values[order]
    sorted_flags = flags[order]
    # 每个不同分值的最后一个位置
    last = np.r_[np.flatnonzero(np.diff(sorted_scores)), sorted_scores.shape[0] - 1]
    tps = np.cumsum(sorted_flags)[last]
    fps = (last + 1) - tps

    tpr = np.r_[0.0, tps / n_out]
    fpr = np.r_[0.0, fps / n_in]
    thresholds = np.r_[np.inf, sorted_scores[last]]
    return fpr, tpr, thresholds


def trapezoid_auc(fpr: np.ndarray, tpr: np.ndarray) -> float:
    """ROC 曲线下面积（梯形积分）"""
    fpr = np.asarray(fpr, dtype=np.float64)
    tpr = np.asarray(tpr, dtype=np.float64)
    return float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))


def evaluate(
    scores: Sequence[float],
    labels: LabelVector,
    order: Optional[Sequence[int]] = None,
    dataset: str = "",
    config_id: str = "",
    seed: int = 0,
    paper_scale: bool = False,
) -> ScoreReport:
    """同时计算 AUC 与 RWS；order 缺省时由分数导出"""
    if order is None:
        order = ranking_order(scores)
    return ScoreReport(
        auc=auc(scores, labels),
        rws=rws(order, labels, paper_scale=paper_scale),
        n_outliers=labels.n_outliers,
        dataset=dataset,
        config_id=config_id,
        seed=seed,
    )
